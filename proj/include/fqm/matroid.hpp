#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fqm/matvec.hpp"

namespace fqm {

/// Per-element summary.  girth_through is empty exactly when the element
/// lies in no circuit at all (a coloop, or a member of a free matroid).
struct ElementStatus {
    std::string element;
    bool is_coloop = false;
    std::optional<int> girth_through;
    bool is_loose = false;  ///< every circuit through the element has size >= rank
    bool is_free = false;   ///< loose and additionally no circuit of size rank, or coloop
};

/// The matroid of the columns of a matrix over GF(q).  Wraps the matrix with
/// cached invariants (rank, simplicity, coloops, per-element girth).  The
/// object is immutable; concurrent queries are safe, with lazily memoized
/// values filled idempotently.
class LinearMatroid {
public:
    explicit LinearMatroid(FqMatrix rep);

    const FqMatrix& rep() const { return rep_; }
    int rank() const { return rank_; }
    int size() const { return rep_.cols(); }
    int q() const { return rep_.field().q(); }
    const std::vector<std::string>& ground_set() const { return rep_.labels(); }

    /// No zero columns (loops) and no projectively equal columns (parallel
    /// pairs).
    bool is_simple() const { return simple_; }
    const std::vector<std::string>& coloops() const { return coloops_; }

    int rank_of_subset(const std::vector<std::string>& subset) const;

    /// All circuits of size <= max_size (default: rank + 1, which covers
    /// every circuit).  Sorted by size, then lexicographically by column
    /// order.  Guard: size() <= 24.
    std::vector<std::vector<std::string>> circuits(std::optional<int> max_size = {}) const;

    /// Smallest circuit size through e; empty when no circuit passes
    /// through e.  Computed as 1 + (the minimum number of other columns
    /// whose span contains e's column).
    std::optional<int> girth_through(const std::string& e) const;

    /// Smallest circuit size overall; empty when the matroid is free.
    std::optional<int> girth() const;

    ElementStatus element_status(const std::string& e) const;

    /// A witness circuit through e of the minimal size, deterministic for a
    /// given representation; empty when e lies in no circuit.
    std::optional<std::vector<std::string>> min_circuit_through(const std::string& e) const;

    /// A spanning circuit (size rank+1) through e, if one exists.  The
    /// search is exact and deterministic.
    std::optional<std::vector<std::string>> spanning_circuit_through(const std::string& e) const;

    /// Dual matroid on the same ground set (labels preserved, column order
    /// preserved).
    LinearMatroid dual() const;

    std::vector<std::vector<std::string>> cocircuits(std::optional<int> max_size = {}) const;

    /// Direct rank test: E - S has rank r-1 and restoring any one element of
    /// S brings the rank back to r.
    bool is_cocircuit(const std::vector<std::string>& members) const;

    LinearMatroid restricted(const std::vector<std::string>& keep) const;
    LinearMatroid deleted(const std::vector<std::string>& drop) const;

    /// S spans a flat of rank r-1 and is closed.
    bool is_hyperplane(const std::vector<std::string>& members) const;

    /// Every circuit has size >= rank (vacuously true without circuits).
    bool is_paving() const;

    /// Paving with a paving dual.  When size() <= 24 this is cross-checked
    /// against the circuit-side criterion (every circuit of size <= rank is
    /// a closed set); disagreement would be an internal fault and throws.
    bool is_sparse_paving() const;

    /// Whole ground set is a single circuit.
    bool is_circuit() const;

    /// True when some circuit has size rank+1.
    bool has_spanning_circuit() const;

private:
    struct Cache;

    FqMatrix rep_;
    int rank_;
    bool simple_;
    std::vector<std::string> coloops_;
    std::shared_ptr<Cache> cache_;

    const FqMatrix& work() const { return comp_ ? *comp_ : rep_; }
    std::optional<int> girth_through_index(int e) const;
    std::optional<std::vector<int>> min_circuit_index(int e) const;
    std::optional<std::vector<int>> spanning_circuit_index(int e) const;

    std::optional<FqMatrix> comp_;  ///< row-compressed copy when rep_ has dead rows
};

/// Label-to-label mapping witnessing an isomorphism or embedding.
using IsoMapping = std::map<std::string, std::string>;

/// Searches for a ground-set bijection A -> B preserving the rank of every
/// subset.  Over GF(2) this runs a complete search over invertible column
/// transformations; over other fields it backtracks over element images and
/// verifies rank agreement on all subsets of size <= rank+1.  anchor, when
/// given, pins one element's image.  Guards: |E| <= 14 unanchored,
/// |E| <= 18 anchored.
std::optional<IsoMapping> iso_check(const LinearMatroid& a, const LinearMatroid& b,
                                    std::optional<std::pair<std::string, std::string>> anchor = {});

/// Searches for an injection of M's ground set into F's with M isomorphic to
/// the restriction of F to the image, mapping e to e_f when anchored.
/// GF(2) only (complete via the transformation search); ranks must agree.
std::optional<IsoMapping> embeds_into(const LinearMatroid& m, const LinearMatroid& f,
                                      std::optional<std::pair<std::string, std::string>> anchor = {});

}  // namespace fqm
