#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqm/matroid.hpp"

namespace fqm {

enum class Family { Lr, Jr, Mr, Nr, Pr, Fano, AG32, Golay12 };

/// A constructed matroid together with its distinguished element (when the
/// family has one) and the labels of the series class the distinguished
/// element belongs to (mutual clones; empty when not applicable).
struct BuiltFamily {
    LinearMatroid matroid;
    std::string designated;
    std::vector<std::string> series_class;
};

/// Fixed binary matrices, one per rank:
///   Lr (r >= 4): [I_r | e c2 c3 c4], e all-ones, c2 = b1+b2, c3 = b1+b3,
///                c4 = b2+b3; r+4 elements.
///   Jr (r >= 4): [I_r | e c2 c3 c4], e = b2+...+br, c2 = b1+b2+b3,
///                c3 = b1+b2+b4, c4 = b1+b3+b4; r+4 elements.
///   Mr (r >= 3): [I_r | e g_1..g_{r-1}], e all-ones, g_j = b1+b_{j+1};
///                2r elements.
///   Nr (r >= 3): [I_r | e g_1..g_{r-2}], e = b2+...+br, g_j = b1+b2+b_{j+2};
///                2r-1 elements.
/// The designated element is "e" throughout.
BuiltFamily build_figure(Family which, int r);

/// The same families assembled from smaller pieces (plus Pr, which only
/// exists in this form):
///   Pr (r >= 2): r-1 three-point lines glued at a common point b; elements
///                b, x_1..x_{r-1}, y_1..y_{r-1}.
///   Mr (r >= 3): Pr extended by z = b + x_1 + ... + x_{r-1}; designated z.
///   Nr (r >= 4): dual of (M_{r-1} extended by w, the third point on the
///                line through z and b); designated b.
///   Lr (r >= 4): Fano plane with one point replaced by a series class of
///                r-2 clones; designated member of the class.
///   Jr (r >= 4): AG(3,2) with one point replaced by a series class of r-3
///                clones; designated member of the class.
BuiltFamily build_structural(Family which, int r);

/// Fixed-size matroids: the Fano plane (designated element the all-ones
/// point), the binary affine cube AG(3,2) (same), and the ternary [12,6]
/// self-dual code matroid with minimum weight 6.  The code construction
/// verifies both properties on the spot and refuses to hand out a bad
/// matrix.
BuiltFamily build_named(Family which);

/// U_{m,n} over GF(q) via a Vandermonde matrix on distinct field elements,
/// plus the (0,..,0,1) column when n = q+1.  Requires 2 <= m <= n <= q+1,
/// except m = n (a basis) which works for every n.  Rejects m <= 1 (loops
/// and parallel classes).
BuiltFamily build_uniform(int m, int n, int q);

/// The circuit U_{r,r+1} as [I_r | all-ones] over GF(q); designated element
/// the all-ones column "e".
BuiltFamily build_circuit_uniform(int r, int q);

/// Replaces x by a series class of class_size mutual clones (labels x,
/// x#2, ..).  Implemented as parallel extension in the dual.  class_size 1
/// returns the matroid unchanged.  The new labels land in *class_labels
/// when given.
LinearMatroid series_substitute(const LinearMatroid& m, const std::string& x, int class_size,
                                std::vector<std::string>* class_labels = nullptr);

/// Parallel connection across a basepoint: both representations are
/// row-transformed so the basepoint column is the first unit vector, then
/// glued along that shared axis.  The junction keeps ea's label; clashing
/// labels on the b side get primes appended.  Basepoints must not be loops.
LinearMatroid parallel_connection(const LinearMatroid& a, const std::string& ea,
                                  const LinearMatroid& b, const std::string& eb);

/// Parallel connection with the junction deleted.  Basepoints must be
/// neither loops nor coloops.
LinearMatroid two_sum(const LinearMatroid& a, const std::string& ea,
                      const LinearMatroid& b, const std::string& eb);

}  // namespace fqm
