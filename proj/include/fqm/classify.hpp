#pragma once

#include <array>
#include <string>
#include <vector>

#include "fqm/families.hpp"

namespace fqm {

enum class BinaryCase { Spanning, Nonspanning };
enum class BinaryFamily { Lr, Jr, MrRestriction, NrRestriction };

struct BinaryLooseVerdict {
    BinaryCase kind;
    BinaryFamily family;
    IsoMapping witness;  ///< verified map into the reference instance (designated element pinned)
};

/// Structure of a simple, coloop-free binary matroid around a loose element
/// e (rank >= 3).  Split on whether a spanning circuit passes through e:
/// with one, the non-frame columns must be weight-2 over the circuit frame
/// and form a star (restriction of Mr) or a triangle (Lr exactly); without
/// one, they are weight-3 through the frame root and form a root-star
/// (restriction of Nr) or a root-triangle (Jr exactly).  The verdict's
/// witness comes from an independent embedding/isomorphism search, so a
/// derivation shortcut cannot silently produce a wrong answer.  Any failed
/// step throws ContradictionError — in particular for elements that are not
/// loose.
BinaryLooseVerdict classify_binary_loose(const LinearMatroid& m, const std::string& e);

/// Column tallies of a ternary matroid around a loose, non-free element e,
/// in the frame [root, C - e] built from a smallest circuit C through e
/// (|C| = rank) and a root column outside its span.  After row scaling,
/// e reads (0,1,..,1); every other column is scaled to a leading/top 1 and
/// lands in a bucket.
struct ColumnCensus {
    int rank = 0;
    std::vector<std::string> circuit;  ///< the frame circuit through e
    int top_zero = 0;                  ///< columns inside the frame hyperplane
    std::array<int, 5> type = {};      ///< [k]: top-1 columns with k nonzero root entries
    int overflow = 0;                  ///< columns breaking the per-column shape (loose mode only)
    long size_bound = 0;               ///< rank-level ceiling on the ground set
};

/// Ceilings implied for the census buckets at a given rank (>= 5).
struct CensusCaps {
    int top_zero;
    int type1;
    int type2;
    int type3;
    int type4;
};

CensusCaps census_caps(int r);

/// floor(max(41r - 101, 35(r - 1)) / 2), the ground-set ceiling for a
/// ternary matroid of rank r >= 5 carrying a loose non-free element.
long ternary_size_bound(int r);

/// strict: a column violating its shape (top-zero columns must read as a
/// signed difference of two frame columns; top-1 columns carry at most two
/// root entries of each sign) throws FalsificationError.  Loose mode tallies
/// violators in overflow instead.
ColumnCensus ternary_census(const LinearMatroid& m, const std::string& e, bool strict = true);

enum class TwoLooseOutcome { CocircuitPair, RankOk, Violation };

struct TwoLooseReport {
    TwoLooseOutcome outcome;
    bool spanning_one_side = false;  ///< spanning circuit through exactly one of the two
    int rank = 0;
    int q = 0;
};

/// Constraint check for two distinct loose elements: either {e,f} is a
/// cocircuit, or the rank is at most 2q (outcome RankOk) — and when a
/// spanning circuit passes through exactly one of them, at most 2q-1
/// (violation of that refinement throws FalsificationError).  Inputs that
/// fail the looseness precondition throw PreconditionError unless
/// verify_loose is off.
TwoLooseReport two_loose_audit(const LinearMatroid& m, const std::string& e,
                               const std::string& f, bool verify_loose = true);

enum class PavingClass { Circuit, RankLeQ, SparsePaving };

struct PavingReport {
    PavingClass cls;
    int rank = 0;
    int size = 0;
    int q = 0;
    bool sparse_paving = false;
    bool has_spanning_circuit = false;
    bool rank_eq_2q = false;
};

/// Constraint check for a coloop-free paving matroid: circuits are
/// unconstrained; otherwise the rank is at most 2q, a rank of exactly 2q
/// rules out spanning circuits, and a rank above q forces sparse paving
/// with at most 4q elements.  Violations throw FalsificationError.
PavingReport paving_audit(const LinearMatroid& m, bool verify_paving = true);

enum class FreeShape { Circuit, U24, TwoSumTree };

struct FreeStructure {
    FreeShape shape;
    int petal_count = 0;                    ///< four-point lines peeled off (TwoSumTree)
    std::vector<std::string> base_circuit;  ///< ground set of the core after peeling
};

/// Shape of a simple, coloop-free matroid around a free element e.  Over
/// GF(2) the matroid must be a circuit.  Over GF(3) it is a four-point
/// line, a circuit, or a circuit with four-point-line petals attached by
/// 2-sums across distinct base elements; the check peels petals one at a
/// time and verifies the core.  Shape failures throw FalsificationError.
FreeStructure free_structure_check(const LinearMatroid& m, const std::string& e,
                                   bool verify_free = true);

}  // namespace fqm
