#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/families.hpp"
#include "fqm/matrix_io.hpp"

using namespace fqm;

namespace {

std::string print1(const MatrixFile& mf) {
    std::ostringstream os;
    write_matrix(os, mf);
    return os.str();
}

MatrixFile parse1(const std::string& s) {
    std::istringstream is(s);
    return read_matrix(is);
}

int parse_fails_at(const std::string& s) {
    try {
        parse1(s);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

std::string golden_dir() {
    const char* d = std::getenv("FQMATROID_GOLDEN_DIR");
    REQUIRE(d != nullptr);
    return d;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("write/parse round trip preserves every field") {
    auto fam = build_figure(Family::Mr, 5);
    MatrixFile mf = from_matrix(fam.matroid.rep(), fam.designated);
    std::string text = print1(mf);
    MatrixFile back = parse1(text);
    CHECK(back.q == 2);
    CHECK(back.rows == 5);
    CHECK(back.cols == 10);
    CHECK(back.labels == mf.labels);
    CHECK(back.data == mf.data);
    REQUIRE(back.designated.has_value());
    CHECK(*back.designated == "e");
    CHECK(print1(back) == text);  // canonical text is a fixed point
    CHECK(to_matrix(back) == fam.matroid.rep());
}

TEST_CASE("comments, blank lines, and default labels") {
    MatrixFile d = parse1("# hello\nq 3\n\nrows 2\ncols 3\n0 1 2\n# mid-data comment\n2 0 1\n");
    CHECK(d.labels == std::vector<std::string>{"c1", "c2", "c3"});
    CHECK(d.at(1, 0) == 2);
    CHECK(d.at(0, 2) == 2);
    CHECK(!d.designated.has_value());
}

TEST_CASE("parse errors carry the offending 1-based line number") {
    CHECK(parse_fails_at("q 6\nrows 1\ncols 1\n0\n") == 1);                        // unsupported q
    CHECK(parse_fails_at("q 3\nrows 1\ncols 2\n0 3\n") == 4);                      // code >= q
    CHECK(parse_fails_at("q 3\nrows 1\ncols 2\n0 x\n") == 4);                      // junk code
    CHECK(parse_fails_at("q 3\nrows 2\ncols 1\n0\n") == 4);                        // missing data row
    CHECK(parse_fails_at("q 3\nrows 1\ncols 1\n0\n1\n") == 5);                     // extra data row
    CHECK(parse_fails_at("q 3\nrows 1\ncols 2\n0\n") == 4);                        // short data row
    CHECK(parse_fails_at("q 3\nq 3\nrows 1\ncols 1\n0\n") == 2);                   // duplicate header
    CHECK(parse_fails_at("rows 1\ncols 1\n0\n") == 3);                             // data before q
    CHECK(parse_fails_at("q 3\nrows 1\ncols 2\nlabels a\n0 1\n") == 4);            // label count
    CHECK(parse_fails_at("q 3\nrows 1\ncols 2\nlabels a a\n0 1\n") == 4);          // duplicate label
    CHECK(parse_fails_at("q 3\nrows 1\ncols 1\n0\n# designated e=z\n") == 5);      // unknown element
    CHECK(parse_fails_at("q 3\nrows 1\ncols 1\n# designated e=c1\n# designated e=c1\n0\n") == 5);
    CHECK(parse_fails_at("q 3\nrows 1\ncols 1\n# designated c1\n0\n") == 4);       // malformed comment
    CHECK(parse_fails_at("q 3\nrows 0\ncols 1\n") == 2);                           // zero dimension
    CHECK(parse_fails_at("") == 1);                                                // empty input
    CHECK_THROWS_AS(read_matrix_file("/nonexistent/x.mat"), ResourceError);
}

TEST_CASE("windows line endings and stray spacing are tolerated") {
    MatrixFile d = parse1("q 2\r\nrows 1\r\ncols 2\r\n  1   0  \r\n");
    CHECK(d.q == 2);
    CHECK(d.at(0, 0) == 1);
    CHECK(d.at(0, 1) == 0);
}

TEST_CASE("matrix conversion validates through the field constructor") {
    MatrixFile mf;
    mf.q = 9;
    mf.rows = 1;
    mf.cols = 2;
    mf.labels = {"a", "b"};
    mf.data = {7, 8};
    CHECK(to_matrix(mf).field().q() == 9);
    mf.q = 4;  // stale codes 7,8 are now out of range
    CHECK_THROWS_AS(to_matrix(mf), PreconditionError);
}

TEST_CASE("golden files: canonical bytes and matroid content are both pinned") {
    const std::string dir = golden_dir();
    struct Entry {
        const char* file;
        Family family;
        int rank;  // 0: fixed-size catalog entry
    };
    const Entry entries[] = {
        {"lr5.mat", Family::Lr, 5},   {"jr5.mat", Family::Jr, 5}, {"mr5.mat", Family::Mr, 5},
        {"nr5.mat", Family::Nr, 5},   {"fano.mat", Family::Fano, 0},
        {"ag32.mat", Family::AG32, 0}, {"golay12.mat", Family::Golay12, 0},
    };
    for (const auto& ent : entries) {
        CAPTURE(ent.file);
        const std::string path = dir + "/" + ent.file;
        const std::string text = slurp(path);
        MatrixFile parsed = parse1(text);
        CHECK(print1(parsed) == text);  // parse-then-print reproduces the bytes
        BuiltFamily built = ent.rank > 0 ? build_figure(ent.family, ent.rank) : build_named(ent.family);
        CHECK(to_matrix(parsed) == built.matroid.rep());
        REQUIRE(parsed.designated.has_value() == !built.designated.empty());
        if (parsed.designated) CHECK(*parsed.designated == built.designated);
    }
}
