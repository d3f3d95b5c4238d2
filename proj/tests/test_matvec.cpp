#include <random>
#include <vector>

#include "doctest.h"
#include "fqm/matvec.hpp"
#include "oracles.hpp"

using namespace fqm;

namespace {

FqMatrix random_matrix(std::mt19937& g, const FieldSpec& F, int rows, int cols) {
    std::vector<Code> data(static_cast<size_t>(rows) * cols);
    for (auto& c : data) c = static_cast<Code>(g() % static_cast<unsigned>(F.q()));
    std::vector<std::string> labels;
    for (int j = 1; j <= cols; ++j) labels.push_back("c" + std::to_string(j));
    return FqMatrix(F, rows, std::move(labels), std::move(data));
}

std::vector<int> all_cols(const FqMatrix& m) {
    std::vector<int> v;
    for (int j = 0; j < m.cols(); ++j) v.push_back(j);
    return v;
}

}  // namespace

TEST_CASE("matrix construction, access, and label lookup") {
    const FieldSpec F = make_field(3);
    FqMatrix m = FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"b", {0, 1}}, {"d", {1, 2}}});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.at(1, 2) == 2);
    CHECK(m.col(2)[0] == 1);
    CHECK(m.label(2) == "d");
    CHECK(m.has_label("b"));
    CHECK(!m.has_label("z"));
    CHECK(m.col_index("d") == 2);
    CHECK_THROWS_AS(m.col_index("z"), PreconditionError);

    FqMatrix s = m.select({2, 0});
    CHECK(s.cols() == 2);
    CHECK(s.label(0) == "d");
    CHECK(s.at(1, 0) == 2);

    FqMatrix w = m.with_column("x", {2, 2});
    CHECK(w.cols() == 4);
    CHECK(w.at(0, 3) == 2);
    CHECK_THROWS_AS(m.with_column("a", {1, 1}), PreconditionError);   // label taken
    CHECK_THROWS_AS(m.with_column("y", {1, 1, 1}), PreconditionError);  // wrong height

    CHECK_THROWS_AS(FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"a", {0, 1}}}), PreconditionError);
    CHECK_THROWS_AS(FqMatrix(F, 2, {"a"}, {1, 2, 3}), PreconditionError);  // data size mismatch
    CHECK_THROWS_AS(FqMatrix(F, 1, {"a"}, {7}), PreconditionError);        // code out of range
}

TEST_CASE("gaussian rank agrees with span saturation on random matrices") {
    std::mt19937 g(7001);
    for (int q : {2, 3, 4, 5, 9}) {
        CAPTURE(q);
        const FieldSpec F = make_field(q);
        for (int trial = 0; trial < 40; ++trial) {
            int rows = 1 + static_cast<int>(g() % 4);
            int cols = 1 + static_cast<int>(g() % 6);
            FqMatrix m = random_matrix(g, F, rows, cols);
            CHECK(rank_of(m) == oracle::rank_by_span(m, all_cols(m)));
            // random subset too
            std::vector<int> sub;
            for (int j = 0; j < cols; ++j)
                if (g() % 2) sub.push_back(j);
            CHECK(rank_of(m, sub) == oracle::rank_by_span(m, sub));
        }
    }
}

TEST_CASE("packed GF(2) rank path matches the generic one") {
    std::mt19937 g(7002);
    const FieldSpec F = make_field(2);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + static_cast<int>(g() % 6);
        int cols = 1 + static_cast<int>(g() % 8);
        FqMatrix m = random_matrix(g, F, rows, cols);
        auto cols_v = all_cols(m);
        CHECK(detail::rank_gf2_packed(m, cols_v) == detail::rank_generic(m, cols_v));
    }
}

TEST_CASE("incremental elimination: membership, insertion, coordinates") {
    const FieldSpec F = make_field(3);
    FqMatrix m = FqMatrix::from_columns(
        F, 3, {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"d", {1, 2, 0}}, {"e", {0, 0, 1}}});
    GaussState gs(F, 3);
    CHECK(gs.try_insert(m.col(0)));
    CHECK(gs.try_insert(m.col(1)));
    CHECK(!gs.try_insert(m.col(2)));  // d = a + 2b
    CHECK(gs.rank() == 2);
    CHECK(gs.in_span(m.col(2)));
    CHECK(!gs.in_span(m.col(3)));

    auto co = gs.coords(m.col(2));
    REQUIRE(co.has_value());
    REQUIRE(co->size() == 2);
    CHECK((*co)[0] == 1);
    CHECK((*co)[1] == 2);
    CHECK(!gs.coords(m.col(3)).has_value());
    CHECK(gs.coord_functional(m.col(2)) == *co);

    std::vector<Code> v(m.col(2).begin(), m.col(2).end());
    gs.reduce(v);
    CHECK(v == std::vector<Code>{0, 0, 0});
}

TEST_CASE("standard form puts the basis in identity position and remembers its origin") {
    std::mt19937 g(7003);
    for (int q : {2, 3, 5}) {
        CAPTURE(q);
        const FieldSpec F = make_field(q);
        for (int trial = 0; trial < 25; ++trial) {
            FqMatrix m = random_matrix(g, F, 3, 6);
            if (rank_of(m) != 3) continue;
            // greedy basis
            GaussState gs(F, 3);
            std::vector<std::string> basis;
            for (int j = 0; j < m.cols(); ++j)
                if (gs.try_insert(m.col(j))) basis.push_back(m.label(j));
            StandardRep rep = standard_rep(m, basis);
            CHECK(rep.basis_order == basis);
            CHECK(rep.base.rows() == 3);
            CHECK(rep.base.cols() == m.cols());
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(rep.base.at(i, j) == (i == j ? 1 : 0));
            CHECK(origin_map_consistent(rep, m));
            // row transforms preserve the rank of every label subset
            std::vector<std::string> sub;
            for (const auto& l : m.labels())
                if (g() % 2) sub.push_back(l);
            CHECK(rank_of_labels(rep.base, sub) == rank_of_labels(m, sub));
        }
    }
}

TEST_CASE("standard form rejects non-bases") {
    const FieldSpec F = make_field(2);
    FqMatrix m = FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"b", {1, 0}}, {"d", {0, 1}}});
    CHECK_THROWS_AS(standard_rep(m, {"a", "b"}), PreconditionError);  // dependent
    CHECK_THROWS_AS(standard_rep(m, {"a"}), PreconditionError);       // not spanning
}

TEST_CASE("row scaling normalizes the designated column per mode") {
    const FieldSpec F = make_field(3);
    FqMatrix m = FqMatrix::from_columns(
        F, 3,
        {{"b1", {1, 0, 0}}, {"b2", {0, 1, 0}}, {"b3", {0, 0, 1}}, {"e", {2, 1, 2}}, {"x", {0, 1, 1}}});
    StandardRep rep = standard_rep(m, {"b1", "b2", "b3"});

    StandardRep ones = scale_normalize(rep, "e", ScaleMode::AllOnes);
    for (int i = 0; i < 3; ++i) CHECK(ones.base.at(i, ones.base.col_index("e")) == 1);
    CHECK(origin_map_consistent(ones, m));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(ones.base.at(i, j) == (i == j ? 1 : 0));  // identity block survives

    StandardRep top = scale_normalize(rep, "x", ScaleMode::TopZeroRestOnes);
    int xj = top.base.col_index("x");
    CHECK(top.base.at(0, xj) == 0);
    CHECK(top.base.at(1, xj) == 1);
    CHECK(top.base.at(2, xj) == 1);
    CHECK(origin_map_consistent(top, m));

    CHECK_THROWS_AS(scale_normalize(rep, "x", ScaleMode::AllOnes), PreconditionError);
    CHECK_THROWS_AS(scale_normalize(rep, "e", ScaleMode::TopZeroRestOnes), PreconditionError);
}

TEST_CASE("column scaling is recorded and projectively harmless") {
    const FieldSpec F = make_field(5);
    FqMatrix m = FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"b", {0, 1}}, {"d", {2, 3}}});
    StandardRep rep = standard_rep(m, {"a", "b"});
    StandardRep sc = scale_column(rep, "d", 3);
    int dj = sc.base.col_index("d");
    CHECK(sc.base.at(0, dj) == 1);  // 2*3 = 6 = 1
    CHECK(sc.base.at(1, dj) == 4);  // 3*3 = 9 = 4
    CHECK(origin_map_consistent(sc, m));
    CHECK_THROWS_AS(scale_column(rep, "d", 0), PreconditionError);
}

TEST_CASE("support and root-entry readers") {
    const FieldSpec F = make_field(3);
    FqMatrix m = FqMatrix::from_columns(F, 3, {{"a", {1, 0, 0}}, {"b", {0, 1, 0}},
                                               {"d", {0, 0, 1}}, {"x", {0, 2, 1}}});
    StandardRep rep = standard_rep(m, {"a", "b", "d"});
    CHECK(column_support(rep, "x") == std::vector<int>{1, 2});
    CHECK(root_entries(rep, "x") == std::vector<Code>{2, 1});
    CHECK(column_support(rep, "a") == std::vector<int>{0});
    CHECK(root_entries(rep, "a").empty() == false);  // rows 1..: zeros included
    CHECK(root_entries(rep, "a") == std::vector<Code>{0, 0});
}

TEST_CASE("rank by labels helper") {
    const FieldSpec F = make_field(2);
    FqMatrix m = FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"b", {1, 0}}, {"d", {0, 1}}});
    CHECK(rank_of_labels(m, {"a", "b"}) == 1);
    CHECK(rank_of_labels(m, {"a", "d"}) == 2);
    CHECK(rank_of_labels(m, {}) == 0);
}
