#include "fqm/gfq.hpp"

#include <vector>

namespace fqm {
namespace {

// Digits of code in base p, lowest degree first, padded to length k.
std::vector<int> unpack(int code, int p, int k) {
    std::vector<int> d(k, 0);
    for (int i = 0; i < k; ++i) {
        d[i] = code % p;
        code /= p;
    }
    return d;
}

int pack(const std::vector<int>& d, int p) {
    int code = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) code = code * p + d[i];
    return code;
}

// Polynomial product reduced by the irreducible polynomial `irr`
// (monic, degree k, coefficients lowest-first including the leading 1).
int poly_mul(int a, int b, int p, int k, const std::vector<int>& irr) {
    std::vector<int> da = unpack(a, p, k), db = unpack(b, p, k);
    std::vector<int> prod(2 * k - 1, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    // Reduce: x^k == -(irr - x^k), applied from the top degree down.
    for (int d = 2 * k - 2; d >= k; --d) {
        int c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < k; ++i) {
            int t = prod[d - k + i] - c * irr[i];
            prod[d - k + i] = ((t % p) + p) % p;
        }
    }
    prod.resize(k);
    return pack(prod, p);
}

}  // namespace

FieldSpec make_field(int q) {
    int p = 0, k = 0;
    std::vector<int> irr;  // irreducible polynomial for extension fields
    switch (q) {
        case 2: p = 2; k = 1; break;
        case 3: p = 3; k = 1; break;
        case 5: p = 5; k = 1; break;
        case 7: p = 7; k = 1; break;
        case 4: p = 2; k = 2; irr = {1, 1, 1}; break;     // x^2 + x + 1
        case 8: p = 2; k = 3; irr = {1, 1, 0, 1}; break;  // x^3 + x + 1
        case 9: p = 3; k = 2; irr = {1, 0, 1}; break;     // x^2 + 1
        default:
            throw PreconditionError("unsupported field order " + std::to_string(q) +
                                    " (supported: 2, 3, 4, 5, 7, 8, 9)");
    }

    FieldSpec f;
    f.q_ = q;
    f.p_ = p;
    f.k_ = k;

    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            if (k == 1) {
                f.add_[a][b] = static_cast<Code>((a + b) % p);
                f.mul_[a][b] = static_cast<Code>((a * b) % p);
            } else {
                // Addition of polynomial codes is digit-wise mod p.
                std::vector<int> da = unpack(a, p, k), db = unpack(b, p, k);
                for (int i = 0; i < k; ++i) da[i] = (da[i] + db[i]) % p;
                f.add_[a][b] = static_cast<Code>(pack(da, p));
                f.mul_[a][b] = static_cast<Code>(poly_mul(a, b, p, k, irr));
            }
        }
    }
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            if (f.add_[a][b] == 0) f.neg_[a] = static_cast<Code>(b);
            if (a != 0 && f.mul_[a][b] == 1) f.inv_[a] = static_cast<Code>(b);
        }
    }
    return f;
}

}  // namespace fqm
