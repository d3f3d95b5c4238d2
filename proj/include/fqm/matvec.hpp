#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fqm/gfq.hpp"

namespace fqm {

/// Dense matrix over GF(q) with labeled columns, stored column-major.
/// Labels are short distinct strings; matrices are treated as immutable
/// (transforms return new objects).
class FqMatrix {
public:
    /// data is column-major, rows*cols entries; labels.size() == cols.
    FqMatrix(FieldSpec field, int rows, std::vector<std::string> labels, std::vector<Code> data);

    static FqMatrix from_columns(const FieldSpec& field, int rows,
                                 const std::vector<std::pair<std::string, std::vector<Code>>>& cols);

    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(labels_.size()); }
    const FieldSpec& field() const { return field_; }

    Code at(int row, int col) const { return data_[static_cast<size_t>(col) * rows_ + row]; }
    std::span<const Code> col(int j) const {
        return {data_.data() + static_cast<size_t>(j) * rows_, static_cast<size_t>(rows_)};
    }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int j) const { return labels_[j]; }
    bool has_label(const std::string& l) const { return index_.count(l) != 0; }
    int col_index(const std::string& l) const;  ///< throws PreconditionError on unknown label

    FqMatrix select(const std::vector<int>& col_indices) const;
    FqMatrix with_column(const std::string& label, const std::vector<Code>& column) const;

    bool operator==(const FqMatrix& o) const {
        return field_.q() == o.field_.q() && rows_ == o.rows_ && labels_ == o.labels_ && data_ == o.data_;
    }

private:
    FieldSpec field_;
    int rows_;
    std::vector<std::string> labels_;
    std::vector<Code> data_;
    std::unordered_map<std::string, int> index_;
};

/// Incremental Gaussian elimination over GF(q): feed columns, watch the rank
/// grow.  Pivoting is deterministic (lowest unused row index first).
class GaussState {
public:
    explicit GaussState(const FieldSpec& f, int rows) : f_(&f), rows_(rows) {}

    /// Reduces v against the current pivots in place.
    void reduce(std::vector<Code>& v) const;

    /// Adds v as a new pivot if independent of the span so far.
    /// Returns true when the rank grew.
    bool try_insert(std::span<const Code> v);

    bool in_span(std::span<const Code> v) const;
    int rank() const { return static_cast<int>(pivots_.size()); }

    /// Solves span coordinates: returns c with sum_i c[i] * basis[i] == v
    /// (basis = the inserted columns that grew the rank), or nullopt if v is
    /// outside the span.
    std::optional<std::vector<Code>> coords(std::span<const Code> v) const;

    /// The linear functional behind coords(): the accumulated coordinate
    /// vector without the residue test.  Agrees with coords() on the span.
    std::vector<Code> coord_functional(std::span<const Code> v) const;

private:
    const FieldSpec* f_;
    int rows_;
    std::vector<std::vector<Code>> pivots_;     // normalized: 1 at pivot row
    std::vector<std::vector<Code>> pivot_rep_;  // expression over inserted basis columns
    std::vector<int> pivot_row_;
    int inserted_ = 0;
};

/// Rank of the selected columns (all columns when subset is empty and
/// whole_matrix is true via the convenience overload below).
int rank_of(const FqMatrix& m, std::span<const int> col_indices);
int rank_of(const FqMatrix& m);
int rank_of_labels(const FqMatrix& m, const std::vector<std::string>& subset);

namespace detail {
/// Field-generic elimination rank; reference path.
int rank_generic(const FqMatrix& m, std::span<const int> col_indices);
/// Bit-packed GF(2) rank; requires q == 2 and rows <= 32.
int rank_gf2_packed(const FqMatrix& m, std::span<const int> col_indices);
}  // namespace detail

/// How base was obtained from the source matrix: base column j equals
/// col_scale[j] * row_transform * source column source_col[j].
struct OriginMap {
    std::vector<int> source_col;
    std::vector<std::vector<Code>> row_transform;  // rank x rows, row-major
    std::vector<Code> col_scale;
};

/// A matrix rearranged so the chosen basis columns form an identity block:
/// base = [I_r | Q] with the basis first, in the given order, and remaining
/// source columns after it in source order.  Rows of base are coordinates
/// with respect to the basis; zero rows of rank-deficient sources are gone.
struct StandardRep {
    FqMatrix base;
    std::vector<std::string> basis_order;
    OriginMap origin;
};

/// Row-reduces so that `basis` (labels of an actual basis of the column
/// space) becomes I_r in the given order.  No column scaling happens here.
StandardRep standard_rep(const FqMatrix& m, const std::vector<std::string>& basis);

/// Applies origin to the source matrix and checks it reproduces rep.base
/// entry for entry.  Used by tests and the transform self-checks.
bool origin_map_consistent(const StandardRep& rep, const FqMatrix& source);

enum class ScaleMode {
    AllOnes,          ///< e's column must be full support; scale it to all ones
    TopZeroRestOnes,  ///< e's column must vanish exactly at row 0; scale rows 1.. to ones
};

/// Rescales rows so e's column matches the mode pattern, compensating basis
/// columns so the identity block survives.  Column scalings are projective,
/// so the represented matroid is unchanged.  Throws PreconditionError when
/// e's zero pattern does not fit the mode (message lists the bad rows).
StandardRep scale_normalize(const StandardRep& rep, const std::string& e, ScaleMode mode);

/// Scales one column of a standard rep by a nonzero factor, recording it in
/// the origin map.  Projective: the matroid is unchanged.
StandardRep scale_column(const StandardRep& rep, const std::string& label, Code factor);

/// Rows (0-based) where the column is nonzero.
std::vector<int> column_support(const StandardRep& rep, const std::string& label);

/// Entries of the column below row 0 ("root entries" of the normalized form).
std::vector<Code> root_entries(const StandardRep& rep, const std::string& label);

}  // namespace fqm
