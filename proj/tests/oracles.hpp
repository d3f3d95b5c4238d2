#pragma once

// Reference implementations the tests trust instead of the library: field
// products from explicit polynomial arithmetic, ranks from materialized
// spans, circuits from subset enumeration.  Everything favors obviousness
// over speed and is only meant for tiny instances.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "fqm/matvec.hpp"

namespace oracle {

// Product in GF(p^k) as polynomial multiplication over Z_p, reducing with
// x^2 = x+1 (q=4), x^3 = x+1 (q=8), x^2 = 2 (q=9); codes are base-p digit
// packings, lowest degree first.  Prime q reduces mod q.
inline int field_mul(int q, int a, int b) {
    int p, k;
    std::vector<int> low;  // x^k rewritten as a degree-<k polynomial
    if (q == 4) {
        p = 2, k = 2, low = {1, 1};
    } else if (q == 8) {
        p = 2, k = 3, low = {1, 1, 0};
    } else if (q == 9) {
        p = 3, k = 2, low = {2, 0};
    } else {
        return a * b % q;
    }
    std::vector<int> da(static_cast<size_t>(k)), db(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        da[static_cast<size_t>(i)] = a % p;
        db[static_cast<size_t>(i)] = b % p;
        a /= p;
        b /= p;
    }
    std::vector<int> prod(static_cast<size_t>(2 * k - 1), 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            prod[static_cast<size_t>(i + j)] =
                (prod[static_cast<size_t>(i + j)] + da[static_cast<size_t>(i)] * db[static_cast<size_t>(j)]) % p;
    for (int d = 2 * k - 2; d >= k; --d) {
        int c = prod[static_cast<size_t>(d)];
        prod[static_cast<size_t>(d)] = 0;
        for (int i = 0; i < k; ++i)
            prod[static_cast<size_t>(d - k + i)] =
                (prod[static_cast<size_t>(d - k + i)] + c * low[static_cast<size_t>(i)]) % p;
    }
    int v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * p + prod[static_cast<size_t>(i)];
    return v;
}

// Rank by span saturation: walk the chosen columns, and whenever one falls
// outside the set of vectors reachable so far, enlarge that set with every
// multiple.  Exponential in the rank; fine below ~3^7 vectors.
inline int rank_by_span(const fqm::FqMatrix& m, const std::vector<int>& cols) {
    const auto& F = m.field();
    std::set<std::vector<fqm::Code>> span{std::vector<fqm::Code>(static_cast<size_t>(m.rows()), 0)};
    int r = 0;
    for (int j : cols) {
        std::vector<fqm::Code> c(m.col(j).begin(), m.col(j).end());
        if (span.count(c)) continue;
        ++r;
        std::vector<std::vector<fqm::Code>> cur(span.begin(), span.end());
        for (const auto& v : cur)
            for (int t = 1; t < F.q(); ++t) {
                std::vector<fqm::Code> w(v);
                for (int i = 0; i < m.rows(); ++i)
                    w[static_cast<size_t>(i)] =
                        F.add(w[static_cast<size_t>(i)], F.mul(static_cast<fqm::Code>(t), m.at(i, j)));
                span.insert(std::move(w));
            }
    }
    return r;
}

inline bool independent_by_span(const fqm::FqMatrix& m, const std::vector<int>& cols) {
    return rank_by_span(m, cols) == static_cast<int>(cols.size());
}

// All circuits as sorted column-index lists, by checking every subset for
// "dependent with all proper subsets independent".  n <= 12.
inline std::vector<std::vector<int>> circuits_by_enumeration(const fqm::FqMatrix& m) {
    const int n = m.cols();
    std::vector<std::vector<int>> out;
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
        std::vector<int> cols;
        for (int j = 0; j < n; ++j)
            if (s >> j & 1u) cols.push_back(j);
        if (independent_by_span(m, cols)) continue;
        bool minimal = true;
        for (size_t drop = 0; drop < cols.size() && minimal; ++drop) {
            std::vector<int> sub;
            for (size_t t = 0; t < cols.size(); ++t)
                if (t != drop) sub.push_back(cols[t]);
            minimal = independent_by_span(m, sub);
        }
        if (minimal) out.push_back(cols);
    }
    return out;
}

inline std::optional<int> girth_through_by_circuits(const std::vector<std::vector<int>>& circuits, int e) {
    std::optional<int> best;
    for (const auto& c : circuits)
        for (int j : c)
            if (j == e && (!best || static_cast<int>(c.size()) < *best)) best = static_cast<int>(c.size());
    return best;
}

inline bool loose_by_circuits(const std::vector<std::vector<int>>& circuits, int e, int rank) {
    for (const auto& c : circuits)
        for (int j : c)
            if (j == e && static_cast<int>(c.size()) < rank) return false;
    return true;
}

inline bool paving_by_circuits(const std::vector<std::vector<int>>& circuits, int rank) {
    for (const auto& c : circuits)
        if (static_cast<int>(c.size()) < rank) return false;
    return true;
}

}  // namespace oracle
