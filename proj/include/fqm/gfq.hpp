#pragma once

#include <array>
#include <cstdint>

#include "fqm/errors.hpp"

namespace fqm {

/// Field element code, an integer in 0..q-1.
using Code = std::uint8_t;

/// Arithmetic for a small finite field GF(q), q <= 9, held as total lookup
/// tables.  Prime fields are the integers mod p.  Extension fields GF(p^k)
/// encode a polynomial c_0 + c_1 x + ... + c_{k-1} x^{k-1} (coefficients in
/// GF(p), lowest degree first) as the integer c_0 + c_1 p + ... + c_{k-1}
/// p^{k-1}, reduced by a fixed irreducible polynomial:
///
///   GF(4): x^2 + x + 1      GF(8): x^3 + x + 1      GF(9): x^2 + 1
///
/// Tables are immutable after construction and safe for concurrent reads.
/// The arithmetic ops assume codes lie in 0..q-1; data boundaries (matrix
/// constructors, file parsers) are responsible for validating codes.
class FieldSpec {
public:
    int q() const { return q_; }
    int p() const { return p_; }  ///< characteristic
    int k() const { return k_; }  ///< extension degree, q == p^k

    Code add(Code a, Code b) const { return add_[a][b]; }
    Code sub(Code a, Code b) const { return add_[a][neg_[b]]; }
    Code mul(Code a, Code b) const { return mul_[a][b]; }
    Code neg(Code a) const { return neg_[a]; }

    /// Multiplicative inverse.  a == 0 is an error, never a sentinel.
    Code inv(Code a) const {
        if (a == 0) throw PreconditionError("GF(" + std::to_string(q_) + "): inverse of zero");
        return inv_[a];
    }

    /// a / b with the same zero-divisor contract as inv().
    Code div(Code a, Code b) const { return mul_[a][inv(b)]; }

    /// a^n with 0^0 == 1.
    Code pow(Code a, unsigned n) const {
        Code r = 1;
        for (; n; --n) r = mul_[r][a];
        return r;
    }

private:
    friend FieldSpec make_field(int q);
    FieldSpec() = default;

    int q_ = 0, p_ = 0, k_ = 0;
    std::array<std::array<Code, 9>, 9> add_{}, mul_{};
    std::array<Code, 9> neg_{}, inv_{};
};

/// Builds the tables for q in {2,3,4,5,7,8,9}.  Deterministic: the same q
/// always yields identical tables.  Other q (including q = 6) are rejected.
FieldSpec make_field(int q);

}  // namespace fqm
