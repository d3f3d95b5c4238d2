#include "fqm/matrix_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fqm/errors.hpp"

namespace fqm {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

// Nonnegative decimal integer, no sign, no trailing junk.
std::optional<long> parse_nonneg(const std::string& tok) {
    if (tok.empty() || tok.size() > 9) return std::nullopt;
    long v = 0;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

std::string strip_comment_marker(const std::string& line) {
    size_t i = line.find('#');
    return line.substr(i + 1);
}

bool first_nonblank_is_hash(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return false;
}

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

MatrixFile read_matrix(std::istream& in) {
    MatrixFile mf;
    bool saw_q = false, saw_rows = false, saw_cols = false;
    int labels_line = 0;       // 0 = no labels header seen
    int designated_line = 0;   // 0 = no designated comment seen
    std::vector<std::string> label_toks;
    int data_rows = 0;
    std::string line;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;

        if (first_nonblank_is_hash(line)) {
            auto toks = tokens_of(strip_comment_marker(line));
            if (!toks.empty() && toks[0] == "designated") {
                if (toks.size() != 2 || toks[1].rfind("e=", 0) != 0 || toks[1].size() == 2)
                    throw ParseError(lineno, "malformed designated comment (want '# designated e=<label>')");
                if (designated_line != 0)
                    throw ParseError(lineno, "duplicate designated comment");
                mf.designated = toks[1].substr(2);
                designated_line = lineno;
            }
            continue;
        }

        auto toks = tokens_of(line);
        bool header_key = toks[0] == "q" || toks[0] == "rows" || toks[0] == "cols" || toks[0] == "labels";
        if (header_key && data_rows == 0) {
            if (toks[0] == "labels") {
                if (labels_line != 0) throw ParseError(lineno, "duplicate labels header");
                label_toks.assign(toks.begin() + 1, toks.end());
                labels_line = lineno;
                continue;
            }
            if (toks.size() != 2)
                throw ParseError(lineno, "header '" + toks[0] + "' wants exactly one integer");
            auto v = parse_nonneg(toks[1]);
            if (!v || *v <= 0)
                throw ParseError(lineno, "bad value '" + toks[1] + "' for header '" + toks[0] + "'");
            if (toks[0] == "q") {
                if (saw_q) throw ParseError(lineno, "duplicate q header");
                try {
                    make_field(static_cast<int>(*v));
                } catch (const PreconditionError&) {
                    throw ParseError(lineno, "unsupported field size q=" + toks[1]);
                }
                mf.q = static_cast<int>(*v);
                saw_q = true;
            } else if (toks[0] == "rows") {
                if (saw_rows) throw ParseError(lineno, "duplicate rows header");
                mf.rows = static_cast<int>(*v);
                saw_rows = true;
            } else {
                if (saw_cols) throw ParseError(lineno, "duplicate cols header");
                mf.cols = static_cast<int>(*v);
                saw_cols = true;
            }
            continue;
        }

        // Data row.
        if (!saw_q || !saw_rows || !saw_cols)
            throw ParseError(lineno, "data row before complete header (need q, rows, cols)");
        if (data_rows == mf.rows)
            throw ParseError(lineno, "more than " + std::to_string(mf.rows) + " data rows");
        if (static_cast<int>(toks.size()) != mf.cols)
            throw ParseError(lineno, "expected " + std::to_string(mf.cols) + " codes, got " +
                                         std::to_string(toks.size()));
        for (const auto& t : toks) {
            auto v = parse_nonneg(t);
            if (!v) throw ParseError(lineno, "bad code '" + t + "'");
            if (*v >= mf.q)
                throw ParseError(lineno, "code " + t + " out of range for q=" + std::to_string(mf.q));
            mf.data.push_back(static_cast<Code>(*v));
        }
        ++data_rows;
    }

    if (!saw_q || !saw_rows || !saw_cols)
        throw ParseError(lineno == 0 ? 1 : lineno, "missing header (need q, rows, cols)");
    if (data_rows != mf.rows)
        throw ParseError(lineno, "expected " + std::to_string(mf.rows) + " data rows, got " +
                                     std::to_string(data_rows));

    if (labels_line != 0) {
        if (static_cast<int>(label_toks.size()) != mf.cols)
            throw ParseError(labels_line, "labels header lists " + std::to_string(label_toks.size()) +
                                              " names for " + std::to_string(mf.cols) + " columns");
        mf.labels = std::move(label_toks);
    } else {
        for (int j = 1; j <= mf.cols; ++j) mf.labels.push_back("c" + std::to_string(j));
    }
    for (size_t i = 0; i < mf.labels.size(); ++i)
        for (size_t j = i + 1; j < mf.labels.size(); ++j)
            if (mf.labels[i] == mf.labels[j])
                throw ParseError(labels_line, "duplicate column label '" + mf.labels[i] + "'");

    if (mf.designated) {
        bool known = false;
        for (const auto& l : mf.labels) known = known || l == *mf.designated;
        if (!known)
            throw ParseError(designated_line,
                             "designated element '" + *mf.designated + "' is not a column label");
    }
    return mf;
}

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open '" + path + "' for reading");
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const MatrixFile& mf) {
    out << "q " << mf.q << "\n";
    out << "rows " << mf.rows << "\n";
    out << "cols " << mf.cols << "\n";
    out << "labels";
    for (const auto& l : mf.labels) out << " " << l;
    out << "\n";
    for (int i = 0; i < mf.rows; ++i) {
        for (int j = 0; j < mf.cols; ++j) {
            if (j) out << " ";
            out << static_cast<int>(mf.at(i, j));
        }
        out << "\n";
    }
    if (mf.designated) out << "# designated e=" << *mf.designated << "\n";
}

void write_matrix_file(const std::string& path, const MatrixFile& mf) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open '" + path + "' for writing");
    write_matrix(out, mf);
    if (!out) throw ResourceError("write to '" + path + "' failed");
}

FqMatrix to_matrix(const MatrixFile& mf) {
    FieldSpec f = make_field(mf.q);
    std::vector<Code> colmajor(static_cast<size_t>(mf.rows) * mf.cols);
    for (int i = 0; i < mf.rows; ++i)
        for (int j = 0; j < mf.cols; ++j)
            colmajor[static_cast<size_t>(j) * mf.rows + i] = mf.at(i, j);
    return FqMatrix(f, mf.rows, mf.labels, std::move(colmajor));
}

MatrixFile from_matrix(const FqMatrix& m, std::optional<std::string> designated) {
    MatrixFile mf;
    mf.q = m.field().q();
    mf.rows = m.rows();
    mf.cols = m.cols();
    mf.labels = m.labels();
    mf.designated = std::move(designated);
    mf.data.reserve(static_cast<size_t>(mf.rows) * mf.cols);
    for (int i = 0; i < mf.rows; ++i)
        for (int j = 0; j < mf.cols; ++j) mf.data.push_back(m.at(i, j));
    return mf;
}

}  // namespace fqm
