#include "fqm/matvec.hpp"

#include <algorithm>
#include <numeric>

namespace fqm {

FqMatrix::FqMatrix(FieldSpec field, int rows, std::vector<std::string> labels, std::vector<Code> data)
    : field_(field), rows_(rows), labels_(std::move(labels)), data_(std::move(data)) {
    if (rows_ < 0) throw PreconditionError("negative row count");
    if (data_.size() != static_cast<size_t>(rows_) * labels_.size())
        throw PreconditionError("matrix data size does not match rows * cols");
    for (Code c : data_)
        if (c >= field_.q())
            throw PreconditionError("entry code " + std::to_string(int(c)) + " out of range for GF(" +
                                    std::to_string(field_.q()) + ")");
    for (size_t j = 0; j < labels_.size(); ++j) {
        if (labels_[j].empty()) throw PreconditionError("empty column label");
        if (!index_.emplace(labels_[j], static_cast<int>(j)).second)
            throw PreconditionError("duplicate column label '" + labels_[j] + "'");
    }
}

FqMatrix FqMatrix::from_columns(const FieldSpec& field, int rows,
                                const std::vector<std::pair<std::string, std::vector<Code>>>& cols) {
    std::vector<std::string> labels;
    std::vector<Code> data;
    labels.reserve(cols.size());
    data.reserve(static_cast<size_t>(rows) * cols.size());
    for (const auto& [label, col] : cols) {
        if (col.size() != static_cast<size_t>(rows))
            throw PreconditionError("column '" + label + "' has wrong height");
        labels.push_back(label);
        data.insert(data.end(), col.begin(), col.end());
    }
    return FqMatrix(field, rows, std::move(labels), std::move(data));
}

int FqMatrix::col_index(const std::string& l) const {
    auto it = index_.find(l);
    if (it == index_.end()) throw PreconditionError("unknown column label '" + l + "'");
    return it->second;
}

FqMatrix FqMatrix::select(const std::vector<int>& col_indices) const {
    std::vector<std::string> labels;
    std::vector<Code> data;
    labels.reserve(col_indices.size());
    for (int j : col_indices) {
        if (j < 0 || j >= cols()) throw PreconditionError("column index out of range");
        labels.push_back(labels_[j]);
        auto c = col(j);
        data.insert(data.end(), c.begin(), c.end());
    }
    return FqMatrix(field_, rows_, std::move(labels), std::move(data));
}

FqMatrix FqMatrix::with_column(const std::string& label, const std::vector<Code>& column) const {
    std::vector<std::string> labels = labels_;
    labels.push_back(label);
    std::vector<Code> data = data_;
    if (column.size() != static_cast<size_t>(rows_))
        throw PreconditionError("appended column has wrong height");
    data.insert(data.end(), column.begin(), column.end());
    return FqMatrix(field_, rows_, std::move(labels), std::move(data));
}

void GaussState::reduce(std::vector<Code>& v) const {
    for (size_t t = 0; t < pivots_.size(); ++t) {
        Code c = v[pivot_row_[t]];
        if (c == 0) continue;
        const auto& p = pivots_[t];
        for (int i = 0; i < rows_; ++i) v[i] = f_->sub(v[i], f_->mul(c, p[i]));
    }
}

bool GaussState::try_insert(std::span<const Code> v) {
    std::vector<Code> w(v.begin(), v.end());
    std::vector<Code> rep(pivots_.size() + 1, 0);  // over basis columns so far + self
    for (size_t t = 0; t < pivots_.size(); ++t) {
        Code c = w[pivot_row_[t]];
        if (c == 0) continue;
        const auto& p = pivots_[t];
        for (int i = 0; i < rows_; ++i) w[i] = f_->sub(w[i], f_->mul(c, p[i]));
        for (size_t s = 0; s < pivots_.size(); ++s)
            rep[s] = f_->sub(rep[s], f_->mul(c, pivot_rep_[t][s]));
    }
    ++inserted_;
    int row = -1;
    for (int i = 0; i < rows_; ++i)
        if (w[i] != 0) {
            row = i;
            break;
        }
    if (row < 0) return false;
    Code lead_inv = f_->inv(w[row]);
    for (int i = 0; i < rows_; ++i) w[i] = f_->mul(w[i], lead_inv);
    rep[pivots_.size()] = lead_inv;
    for (size_t s = 0; s < pivots_.size(); ++s) rep[s] = f_->mul(rep[s], lead_inv);
    pivots_.push_back(std::move(w));
    pivot_rep_.push_back(std::move(rep));
    pivot_row_.push_back(row);
    // Pad older reps so every rep vector spans all basis slots.
    for (auto& r : pivot_rep_) r.resize(pivots_.size(), 0);
    return true;
}

bool GaussState::in_span(std::span<const Code> v) const {
    std::vector<Code> w(v.begin(), v.end());
    reduce(w);
    return std::all_of(w.begin(), w.end(), [](Code c) { return c == 0; });
}

std::optional<std::vector<Code>> GaussState::coords(std::span<const Code> v) const {
    std::vector<Code> w(v.begin(), v.end());
    std::vector<Code> c(pivots_.size(), 0);
    for (size_t t = 0; t < pivots_.size(); ++t) {
        Code coef = w[pivot_row_[t]];
        if (coef == 0) continue;
        const auto& p = pivots_[t];
        for (int i = 0; i < rows_; ++i) w[i] = f_->sub(w[i], f_->mul(coef, p[i]));
        for (size_t s = 0; s < pivots_.size(); ++s)
            c[s] = f_->add(c[s], f_->mul(coef, pivot_rep_[t][s]));
    }
    for (Code x : w)
        if (x != 0) return std::nullopt;
    return c;
}

std::vector<Code> GaussState::coord_functional(std::span<const Code> v) const {
    std::vector<Code> w(v.begin(), v.end());
    std::vector<Code> c(pivots_.size(), 0);
    for (size_t t = 0; t < pivots_.size(); ++t) {
        Code coef = w[pivot_row_[t]];
        if (coef == 0) continue;
        const auto& p = pivots_[t];
        for (int i = 0; i < rows_; ++i) w[i] = f_->sub(w[i], f_->mul(coef, p[i]));
        for (size_t s = 0; s < pivots_.size(); ++s)
            c[s] = f_->add(c[s], f_->mul(coef, pivot_rep_[t][s]));
    }
    return c;
}

namespace detail {

int rank_generic(const FqMatrix& m, std::span<const int> col_indices) {
    GaussState g(m.field(), m.rows());
    for (int j : col_indices) {
        g.try_insert(m.col(j));
        if (g.rank() == m.rows()) break;
    }
    return g.rank();
}

int rank_gf2_packed(const FqMatrix& m, std::span<const int> col_indices) {
    // Columns as bitmasks; elimination keeps one mask per pivot bit.
    uint32_t pivots[32] = {0};
    int rank = 0;
    for (int j : col_indices) {
        uint32_t v = 0;
        auto c = m.col(j);
        for (int i = 0; i < m.rows(); ++i) v |= static_cast<uint32_t>(c[i]) << i;
        while (v) {
            int b = std::countr_zero(v);
            if (pivots[b]) {
                v ^= pivots[b];
            } else {
                pivots[b] = v;
                ++rank;
                break;
            }
        }
        if (rank == m.rows()) break;
    }
    return rank;
}

}  // namespace detail

int rank_of(const FqMatrix& m, std::span<const int> col_indices) {
    if (m.field().q() == 2 && m.rows() <= 32) return detail::rank_gf2_packed(m, col_indices);
    return detail::rank_generic(m, col_indices);
}

int rank_of(const FqMatrix& m) {
    std::vector<int> all(m.cols());
    std::iota(all.begin(), all.end(), 0);
    return rank_of(m, all);
}

int rank_of_labels(const FqMatrix& m, const std::vector<std::string>& subset) {
    std::vector<int> idx;
    idx.reserve(subset.size());
    for (const auto& l : subset) idx.push_back(m.col_index(l));
    return rank_of(m, idx);
}

StandardRep standard_rep(const FqMatrix& m, const std::vector<std::string>& basis) {
    const FieldSpec& f = m.field();
    int r = rank_of(m);
    if (static_cast<int>(basis.size()) != r)
        throw PreconditionError("basis size " + std::to_string(basis.size()) +
                                " does not match matrix rank " + std::to_string(r));

    GaussState g(f, m.rows());
    std::vector<int> basis_idx;
    basis_idx.reserve(basis.size());
    for (const auto& l : basis) {
        int j = m.col_index(l);
        basis_idx.push_back(j);
        if (!g.try_insert(m.col(j)))
            throw PreconditionError("basis column '" + l + "' is dependent on the ones before it");
    }

    // Row transform: the coordinate functional evaluated at each unit
    // vector.  Exact on the column space, which is all it gets applied to.
    std::vector<std::vector<Code>> T(r, std::vector<Code>(m.rows(), 0));
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<Code> u(m.rows(), 0);
        u[i] = 1;
        std::vector<Code> cc = g.coord_functional(u);
        for (int t = 0; t < r; ++t) T[t][i] = cc[t];
    }

    std::vector<int> order = basis_idx;
    std::vector<bool> used(m.cols(), false);
    for (int j : basis_idx) used[j] = true;
    for (int j = 0; j < m.cols(); ++j)
        if (!used[j]) order.push_back(j);

    std::vector<std::string> labels;
    std::vector<Code> data;
    labels.reserve(order.size());
    data.reserve(static_cast<size_t>(r) * order.size());
    for (int j : order) {
        auto c = g.coords(m.col(j));
        if (!c) throw PreconditionError("column '" + m.label(j) + "' outside the span of the basis");
        labels.push_back(m.label(j));
        data.insert(data.end(), c->begin(), c->end());
    }

    StandardRep rep{FqMatrix(f, r, std::move(labels), std::move(data)), basis,
                    OriginMap{std::move(order), std::move(T), std::vector<Code>(m.cols(), 1)}};
    return rep;
}

bool origin_map_consistent(const StandardRep& rep, const FqMatrix& source) {
    const FieldSpec& f = source.field();
    const auto& o = rep.origin;
    if (rep.base.cols() != source.cols() || o.source_col.size() != static_cast<size_t>(source.cols()))
        return false;
    int r = rep.base.rows();
    for (int j = 0; j < rep.base.cols(); ++j) {
        auto src = source.col(o.source_col[j]);
        for (int t = 0; t < r; ++t) {
            Code acc = 0;
            for (int i = 0; i < source.rows(); ++i) acc = f.add(acc, f.mul(o.row_transform[t][i], src[i]));
            acc = f.mul(acc, o.col_scale[j]);
            if (acc != rep.base.at(t, j)) return false;
        }
        if (rep.base.label(j) != source.label(o.source_col[j])) return false;
    }
    return true;
}

StandardRep scale_normalize(const StandardRep& rep, const std::string& e, ScaleMode mode) {
    const FieldSpec& f = rep.base.field();
    int r = rep.base.rows();
    auto ecol = rep.base.col(rep.base.col_index(e));

    std::vector<int> bad;
    for (int i = 0; i < r; ++i) {
        bool want_zero = (mode == ScaleMode::TopZeroRestOnes && i == 0);
        if (want_zero != (ecol[i] == 0)) bad.push_back(i);
    }
    if (!bad.empty()) {
        std::string rows;
        for (int i : bad) rows += (rows.empty() ? "" : ", ") + std::to_string(i);
        throw PreconditionError("column '" + e + "' does not fit the scaling mode at rows " + rows);
    }

    std::vector<Code> s(r, 1);
    for (int i = 0; i < r; ++i)
        if (ecol[i] != 0) s[i] = f.inv(ecol[i]);

    StandardRep out = rep;
    std::vector<Code> data;
    data.reserve(static_cast<size_t>(r) * rep.base.cols());
    std::vector<Code> col_scale = rep.origin.col_scale;
    for (int j = 0; j < rep.base.cols(); ++j) {
        std::vector<Code> c(rep.base.col(j).begin(), rep.base.col(j).end());
        for (int i = 0; i < r; ++i) c[i] = f.mul(c[i], s[i]);
        if (j < r) {
            // Basis column: undo the scaling projectively to keep I_r intact.
            Code u = f.inv(s[j]);
            for (int i = 0; i < r; ++i) c[i] = f.mul(c[i], u);
            col_scale[j] = f.mul(col_scale[j], u);
        }
        data.insert(data.end(), c.begin(), c.end());
    }
    out.base = FqMatrix(f, r, rep.base.labels(), std::move(data));
    for (int t = 0; t < r; ++t)
        for (size_t i = 0; i < out.origin.row_transform[t].size(); ++i)
            out.origin.row_transform[t][i] = f.mul(out.origin.row_transform[t][i], s[t]);
    out.origin.col_scale = std::move(col_scale);
    return out;
}

StandardRep scale_column(const StandardRep& rep, const std::string& label, Code factor) {
    const FieldSpec& f = rep.base.field();
    if (factor == 0) throw PreconditionError("column scale factor must be nonzero");
    int j = rep.base.col_index(label);
    StandardRep out = rep;
    std::vector<Code> data;
    data.reserve(static_cast<size_t>(rep.base.rows()) * rep.base.cols());
    for (int jj = 0; jj < rep.base.cols(); ++jj) {
        std::vector<Code> c(rep.base.col(jj).begin(), rep.base.col(jj).end());
        if (jj == j)
            for (auto& x : c) x = f.mul(x, factor);
        data.insert(data.end(), c.begin(), c.end());
    }
    out.base = FqMatrix(f, rep.base.rows(), rep.base.labels(), std::move(data));
    out.origin.col_scale[j] = f.mul(out.origin.col_scale[j], factor);
    return out;
}

std::vector<int> column_support(const StandardRep& rep, const std::string& label) {
    auto c = rep.base.col(rep.base.col_index(label));
    std::vector<int> s;
    for (int i = 0; i < rep.base.rows(); ++i)
        if (c[i] != 0) s.push_back(i);
    return s;
}

std::vector<Code> root_entries(const StandardRep& rep, const std::string& label) {
    auto c = rep.base.col(rep.base.col_index(label));
    return std::vector<Code>(c.begin() + 1, c.end());
}

}  // namespace fqm
