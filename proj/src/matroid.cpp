#include "fqm/matroid.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>

namespace fqm {

namespace {

constexpr int kGirthUnset = -2;
constexpr int kGirthAbsent = -1;

// Ceiling on the additive-group table used by the shortest-combination search.
constexpr std::size_t kBfsStateCap = std::size_t{1} << 22;
// Column count beyond which full circuit enumeration is refused.
constexpr int kEnumColsCap = 24;
// Node ceiling for the spanning-circuit backtracking search.
constexpr long kSpanningNodeBudget = 20'000'000;
// Ground-set ceilings for the isomorphism searches.
constexpr int kIsoPlainCap = 14;
constexpr int kIsoAnchoredCap = 18;

std::uint32_t gf2_mask(const FqMatrix& m, int j) {
    std::uint32_t v = 0;
    for (int i = 0; i < m.rows(); ++i)
        if (m.at(i, j) != 0) v |= std::uint32_t{1} << i;
    return v;
}

bool zero_column(const FqMatrix& m, int j) {
    for (int i = 0; i < m.rows(); ++i)
        if (m.at(i, j) != 0) return false;
    return true;
}

FqMatrix zip_columns(const FieldSpec& F, int rows, const std::vector<std::string>& labels,
                     const std::vector<std::vector<Code>>& cols) {
    std::vector<std::pair<std::string, std::vector<Code>>> named;
    named.reserve(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) named.emplace_back(labels[j], cols[j]);
    return FqMatrix::from_columns(F, rows, named);
}

std::vector<int> greedy_basis(const FqMatrix& m) {
    GaussState g(m.field(), m.rows());
    std::vector<int> basis;
    for (int j = 0; j < m.cols(); ++j)
        if (g.try_insert(m.col(j))) basis.push_back(j);
    return basis;
}

// ---------------------------------------------------------------------------
// Shortest-combination search.
//
// girth_through(e) - 1 equals the BFS distance from 0 to e's column vector in
// the additive group GF(q)^rows, where one step adds a nonzero multiple of a
// column other than e.  A shortest walk never repeats a column: merging two
// uses of the same column into one term (or dropping it when the coefficients
// cancel) would shorten the walk.  So a distance-d hit yields d distinct
// columns whose combination is e's vector with every coefficient nonzero,
// i.e. a circuit of size d+1 through e — and no smaller one exists.
// ---------------------------------------------------------------------------

struct GirthHit {
    int dist = kGirthAbsent;  ///< steps to reach e's vector; -1 when unreachable
    std::vector<int> cols;    ///< witness columns (ascending), when requested
};

bool girth_bfs_fits(const FqMatrix& m) {
    if (m.field().q() == 2) return m.rows() <= 24;
    std::size_t total = 1;
    for (int i = 0; i < m.rows(); ++i) {
        total *= static_cast<std::size_t>(m.field().q());
        if (total > kBfsStateCap) return false;
    }
    return true;
}

GirthHit girth_bfs_gf2(const FqMatrix& m, int excl, bool want_witness) {
    const int rows = m.rows();
    const std::size_t total = std::size_t{1} << rows;

    std::vector<std::uint32_t> gen;
    std::vector<int> gcol;
    for (int j = 0; j < m.cols(); ++j) {
        if (j == excl) continue;
        std::uint32_t v = gf2_mask(m, j);
        if (v == 0) continue;
        gen.push_back(v);
        gcol.push_back(j);
    }

    GirthHit hit;
    const std::uint32_t target = gf2_mask(m, excl);
    if (target == 0) {
        hit.dist = 0;
        return hit;
    }

    std::vector<std::uint8_t> dist(total, 0xff);
    dist[0] = 0;
    std::vector<std::uint32_t> cur{0}, nxt;
    int found = -1;
    for (int d = 1; !cur.empty() && found < 0; ++d) {
        nxt.clear();
        for (std::uint32_t v : cur) {
            for (std::size_t gi = 0; gi < gen.size(); ++gi) {
                const std::uint32_t u = v ^ gen[gi];
                if (dist[u] != 0xff) continue;
                dist[u] = static_cast<std::uint8_t>(d);
                if (u == target) {
                    found = d;
                    break;
                }
                nxt.push_back(u);
            }
            if (found >= 0) break;
        }
        cur.swap(nxt);
    }
    if (found < 0) return hit;

    hit.dist = found;
    if (want_witness) {
        // Walk back through strictly decreasing distances; every state of
        // distance < found was already final when the target appeared.
        std::uint32_t v = target;
        for (int k = found; k > 0; --k) {
            for (std::size_t gi = 0; gi < gen.size(); ++gi) {
                const std::uint32_t u = v ^ gen[gi];
                if (dist[u] == k - 1) {
                    hit.cols.push_back(gcol[gi]);
                    v = u;
                    break;
                }
            }
        }
        std::sort(hit.cols.begin(), hit.cols.end());
    }
    return hit;
}

GirthHit girth_bfs_generic(const FqMatrix& m, int excl, bool want_witness) {
    const FieldSpec& F = m.field();
    const int q = F.q();
    const int rows = m.rows();

    std::size_t total = 1;
    std::vector<std::size_t> pw(rows);
    for (int i = 0; i < rows; ++i) {
        pw[i] = total;
        total *= static_cast<std::size_t>(q);
    }

    struct Gen {
        int col;
        std::vector<Code> step;
    };
    std::vector<Gen> gens;
    for (int j = 0; j < m.cols(); ++j) {
        if (j == excl || zero_column(m, j)) continue;
        for (int lam = 1; lam < q; ++lam) {
            Gen g{j, std::vector<Code>(rows)};
            for (int i = 0; i < rows; ++i)
                g.step[i] = F.mul(static_cast<Code>(lam), m.at(i, j));
            gens.push_back(std::move(g));
        }
    }

    GirthHit hit;
    std::size_t target = 0;
    for (int i = 0; i < rows; ++i) target += pw[i] * m.at(i, excl);
    if (target == 0) {
        hit.dist = 0;
        return hit;
    }

    std::vector<std::uint8_t> dist(total, 0xff);
    dist[0] = 0;
    std::vector<std::uint32_t> cur{0}, nxt;
    std::vector<Code> vd(rows);
    auto unpack = [&](std::size_t v) {
        for (int i = 0; i < rows; ++i) {
            vd[i] = static_cast<Code>(v % static_cast<std::size_t>(q));
            v /= static_cast<std::size_t>(q);
        }
    };
    auto apply = [&](const std::vector<Code>& step) {
        std::size_t u = 0;
        for (int i = 0; i < rows; ++i) u += pw[i] * F.add(vd[i], step[i]);
        return u;
    };

    int found = -1;
    for (int d = 1; !cur.empty() && found < 0; ++d) {
        nxt.clear();
        for (std::uint32_t v : cur) {
            unpack(v);
            for (const Gen& g : gens) {
                const std::size_t u = apply(g.step);
                if (dist[u] != 0xff) continue;
                dist[u] = static_cast<std::uint8_t>(d);
                if (u == target) {
                    found = d;
                    break;
                }
                nxt.push_back(static_cast<std::uint32_t>(u));
            }
            if (found >= 0) break;
        }
        cur.swap(nxt);
    }
    if (found < 0) return hit;

    hit.dist = found;
    if (want_witness) {
        std::size_t v = target;
        for (int k = found; k > 0; --k) {
            unpack(v);
            for (const Gen& g : gens) {
                const std::size_t u = apply(g.step);
                if (dist[u] == k - 1) {
                    hit.cols.push_back(g.col);
                    v = u;
                    break;
                }
            }
        }
        std::sort(hit.cols.begin(), hit.cols.end());
    }
    return hit;
}

GirthHit girth_bfs(const FqMatrix& m, int excl, bool want_witness) {
    return m.field().q() == 2 ? girth_bfs_gf2(m, excl, want_witness)
                              : girth_bfs_generic(m, excl, want_witness);
}

// ---------------------------------------------------------------------------
// Circuit enumeration: depth-first over independent subsets in column order.
// A dependent extension I + x (x past the end of I) is a circuit exactly when
// dropping any member of I restores independence; since x closes the unique
// minimal dependency, each circuit is produced once, from I = C - max(C).
// ---------------------------------------------------------------------------

bool minimal_dependency(const FqMatrix& m, const std::vector<int>& I, int x) {
    std::vector<int> probe(I.size());
    for (std::size_t skip = 0; skip < I.size(); ++skip) {
        probe.clear();
        for (std::size_t t = 0; t < I.size(); ++t)
            if (t != skip) probe.push_back(I[t]);
        probe.push_back(x);
        if (rank_of(m, probe) != static_cast<int>(I.size())) return false;
    }
    return true;
}

void circuits_rec(const FqMatrix& m, int max_size, int start, const GaussState& g,
                  std::vector<int>& I, std::vector<std::vector<int>>& out) {
    for (int x = start; x < m.cols(); ++x) {
        if (g.in_span(m.col(x))) {
            if (static_cast<int>(I.size()) + 1 <= max_size && minimal_dependency(m, I, x)) {
                std::vector<int> c = I;
                c.push_back(x);
                out.push_back(std::move(c));
            }
        } else if (static_cast<int>(I.size()) + 2 <= max_size) {
            GaussState g2 = g;
            g2.try_insert(m.col(x));
            I.push_back(x);
            circuits_rec(m, max_size, x + 1, g2, I, out);
            I.pop_back();
        }
    }
}

std::vector<std::vector<int>> circuit_indices(const FqMatrix& m, int max_size) {
    if (m.cols() > kEnumColsCap)
        throw ResourceError("circuit enumeration over " + std::to_string(m.cols()) +
                            " elements exceeds the " + std::to_string(kEnumColsCap) +
                            "-element ceiling");
    std::vector<std::vector<int>> out;
    GaussState g(m.field(), m.rows());
    std::vector<int> I;
    circuits_rec(m, max_size, 0, g, I, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Spanning-circuit search: find an independent B of size rank, disjoint from
// e, with e's coordinates over B supported everywhere.  B + e is then a
// spanning circuit.  Branches where e falls into the span of a proper prefix
// are dead: the support can never grow back.
// ---------------------------------------------------------------------------

struct SpanSearchGf2 {
    const FqMatrix& m;
    int n, r, excl;
    long nodes = 0;
    std::vector<std::uint32_t> cmask;
    std::vector<std::uint32_t> piv, rep, lead;
    std::uint32_t eres = 0, erep = 0;
    std::vector<int> chosen;

    SpanSearchGf2(const FqMatrix& mm, int excl_col, int rank)
        : m(mm), n(mm.cols()), r(rank), excl(excl_col), cmask(static_cast<std::size_t>(n)) {
        for (int j = 0; j < n; ++j) cmask[static_cast<std::size_t>(j)] = gf2_mask(m, j);
        eres = cmask[static_cast<std::size_t>(excl)];
    }

    bool run(int start) {
        const int need = r - static_cast<int>(chosen.size());
        if (need == 0) return eres == 0 && erep == (std::uint32_t{1} << r) - 1;
        for (int j = start; j < n; ++j) {
            if (j == excl) continue;
            if (n - j - (excl >= j ? 1 : 0) < need) break;
            if (++nodes > kSpanningNodeBudget)
                throw ResourceError("spanning-circuit search exceeded its node budget");
            std::uint32_t v = cmask[static_cast<std::size_t>(j)];
            std::uint32_t rp = std::uint32_t{1} << chosen.size();
            for (std::size_t t = 0; t < piv.size(); ++t)
                if (v & lead[t]) {
                    v ^= piv[t];
                    rp ^= rep[t];
                }
            if (v == 0) continue;
            const std::uint32_t lnew = v & (0u - v);
            const std::uint32_t save_res = eres, save_rep = erep;
            if (eres & lnew) {
                eres ^= v;
                erep ^= rp;
            }
            if (eres == 0 && static_cast<int>(chosen.size()) + 1 < r) {
                eres = save_res;
                erep = save_rep;
                continue;
            }
            piv.push_back(v);
            rep.push_back(rp);
            lead.push_back(lnew);
            chosen.push_back(j);
            if (run(j + 1)) return true;
            chosen.pop_back();
            piv.pop_back();
            rep.pop_back();
            lead.pop_back();
            eres = save_res;
            erep = save_rep;
        }
        return false;
    }
};

struct SpanSearchGeneric {
    const FqMatrix& m;
    const FieldSpec& F;
    int n, r, excl, rows;
    long nodes = 0;
    std::vector<std::vector<Code>> piv, rep;
    std::vector<int> lead;
    std::vector<Code> eres, erep;
    std::vector<int> chosen;

    SpanSearchGeneric(const FqMatrix& mm, int excl_col, int rank)
        : m(mm), F(mm.field()), n(mm.cols()), r(rank), excl(excl_col), rows(mm.rows()),
          erep(static_cast<std::size_t>(rank), 0) {
        auto e = m.col(excl);
        eres.assign(e.begin(), e.end());
    }

    void axpy(std::vector<Code>& y, Code f, const std::vector<Code>& x) {
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = F.sub(y[i], F.mul(f, x[i]));
    }

    bool run(int start) {
        const int need = r - static_cast<int>(chosen.size());
        if (need == 0) {
            for (Code c : eres)
                if (c != 0) return false;
            for (Code c : erep)
                if (c == 0) return false;
            return true;
        }
        for (int j = start; j < n; ++j) {
            if (j == excl) continue;
            if (n - j - (excl >= j ? 1 : 0) < need) break;
            if (++nodes > kSpanningNodeBudget)
                throw ResourceError("spanning-circuit search exceeded its node budget");
            auto cj = m.col(j);
            std::vector<Code> v(cj.begin(), cj.end());
            std::vector<Code> rp(static_cast<std::size_t>(r), 0);
            rp[chosen.size()] = 1;
            for (std::size_t t = 0; t < piv.size(); ++t) {
                const Code f = v[static_cast<std::size_t>(lead[t])];
                if (f != 0) {
                    axpy(v, f, piv[t]);
                    axpy(rp, f, rep[t]);
                }
            }
            int lnew = -1;
            for (int i = 0; i < rows; ++i)
                if (v[static_cast<std::size_t>(i)] != 0) {
                    lnew = i;
                    break;
                }
            if (lnew < 0) continue;
            const Code s = F.inv(v[static_cast<std::size_t>(lnew)]);
            for (auto& c : v) c = F.mul(s, c);
            for (auto& c : rp) c = F.mul(s, c);
            const std::vector<Code> save_res = eres, save_rep = erep;
            const Code f = eres[static_cast<std::size_t>(lnew)];
            if (f != 0) {
                axpy(eres, f, v);
                axpy(erep, f, rp);
            }
            bool trapped = static_cast<int>(chosen.size()) + 1 < r;
            if (trapped) {
                trapped = true;
                for (Code c : eres)
                    if (c != 0) {
                        trapped = false;
                        break;
                    }
            }
            if (trapped) {
                eres = save_res;
                erep = save_rep;
                continue;
            }
            piv.push_back(std::move(v));
            rep.push_back(std::move(rp));
            lead.push_back(lnew);
            chosen.push_back(j);
            if (run(j + 1)) return true;
            chosen.pop_back();
            piv.pop_back();
            rep.pop_back();
            lead.pop_back();
            eres = save_res;
            erep = save_rep;
        }
        return false;
    }
};

std::optional<std::vector<int>> spanning_search(const FqMatrix& m, int excl, int rank,
                                                int start) {
    if (rank + 1 > m.cols()) return std::nullopt;
    if (rank > 0 && zero_column(m, excl)) return std::nullopt;
    if (m.field().q() == 2 && m.rows() <= 31) {
        SpanSearchGf2 s(m, excl, rank);
        if (s.run(start)) return s.chosen;
        return std::nullopt;
    }
    SpanSearchGeneric s(m, excl, rank);
    if (s.run(start)) return s.chosen;
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearMatroid
// ---------------------------------------------------------------------------

struct LinearMatroid::Cache {
    std::vector<std::atomic<int>> girth;
    explicit Cache(std::size_t n) : girth(n) {
        for (auto& a : girth) a.store(kGirthUnset, std::memory_order_relaxed);
    }
};

LinearMatroid::LinearMatroid(FqMatrix rep) : rep_(std::move(rep)) {
    const FieldSpec& F = rep_.field();
    const int n = rep_.cols();
    const int rows = rep_.rows();

    GaussState g(F, rows);
    std::vector<int> basis;
    for (int j = 0; j < n; ++j)
        if (g.try_insert(rep_.col(j))) basis.push_back(j);
    rank_ = static_cast<int>(basis.size());

    if (rank_ > 0 && rank_ < rows) {
        // Dead rows slow every search; re-express the columns over a column
        // basis so internal work runs in rank-many rows.
        std::vector<std::vector<Code>> cols;
        cols.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            auto c = g.coords(rep_.col(j));
            cols.push_back(std::move(*c));
        }
        comp_.emplace(zip_columns(F, rank_, rep_.labels(), cols));
    }

    const FqMatrix& w = work();
    coloops_.clear();
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(n) - 1);
    for (int e = 0; e < n; ++e) {
        rest.clear();
        for (int j = 0; j < n; ++j)
            if (j != e) rest.push_back(j);
        if (rank_of(w, rest) < rank_) coloops_.push_back(rep_.labels()[static_cast<std::size_t>(e)]);
    }

    simple_ = true;
    std::map<std::vector<Code>, int> seen;
    for (int j = 0; j < n && simple_; ++j) {
        auto c = w.col(j);
        std::vector<Code> v(c.begin(), c.end());
        int nz = -1;
        for (int i = 0; i < w.rows(); ++i)
            if (v[static_cast<std::size_t>(i)] != 0) {
                nz = i;
                break;
            }
        if (nz < 0) {
            simple_ = false;  // loop
            break;
        }
        const Code s = F.inv(v[static_cast<std::size_t>(nz)]);
        for (auto& cc : v) cc = F.mul(s, cc);
        if (!seen.emplace(std::move(v), j).second) simple_ = false;  // parallel pair
    }

    cache_ = std::make_shared<Cache>(static_cast<std::size_t>(n));
}

int LinearMatroid::rank_of_subset(const std::vector<std::string>& members) const {
    std::vector<int> idx;
    idx.reserve(members.size());
    for (const auto& l : members) idx.push_back(rep_.col_index(l));
    return rank_of(work(), idx);
}

std::vector<std::vector<std::string>> LinearMatroid::circuits(std::optional<int> max_size) const {
    const int cap = max_size.value_or(rank_ + 1);
    auto idx = circuit_indices(work(), cap);
    std::vector<std::vector<std::string>> out;
    out.reserve(idx.size());
    for (const auto& c : idx) {
        std::vector<std::string> labels;
        labels.reserve(c.size());
        for (int j : c) labels.push_back(rep_.labels()[static_cast<std::size_t>(j)]);
        out.push_back(std::move(labels));
    }
    return out;
}

std::optional<int> LinearMatroid::girth_through_index(int e) const {
    const int cached = cache_->girth[static_cast<std::size_t>(e)].load(std::memory_order_acquire);
    if (cached != kGirthUnset)
        return cached == kGirthAbsent ? std::nullopt : std::optional<int>(cached);

    int val = kGirthAbsent;
    if (girth_bfs_fits(work())) {
        const GirthHit hit = girth_bfs(work(), e, false);
        if (hit.dist >= 0) val = hit.dist + 1;
    } else {
        // State table too wide; fall back to full circuit enumeration.
        const auto& label = rep_.labels()[static_cast<std::size_t>(e)];
        for (const auto& c : circuits()) {
            if (std::find(c.begin(), c.end(), label) != c.end()) {
                val = static_cast<int>(c.size());
                break;  // circuits come smallest-first
            }
        }
    }
    cache_->girth[static_cast<std::size_t>(e)].store(val, std::memory_order_release);
    return val == kGirthAbsent ? std::nullopt : std::optional<int>(val);
}

std::optional<int> LinearMatroid::girth_through(const std::string& e) const {
    return girth_through_index(rep_.col_index(e));
}

std::optional<int> LinearMatroid::girth() const {
    std::optional<int> best;
    for (int e = 0; e < size(); ++e) {
        auto g = girth_through_index(e);
        if (g && (!best || *g < *best)) best = g;
    }
    return best;
}

ElementStatus LinearMatroid::element_status(const std::string& e) const {
    const int idx = rep_.col_index(e);
    ElementStatus st;
    st.element = e;
    st.is_coloop =
        std::find(coloops_.begin(), coloops_.end(), e) != coloops_.end();
    st.girth_through = girth_through_index(idx);
    st.is_loose = !st.girth_through || *st.girth_through >= rank_;
    st.is_free = !st.girth_through || *st.girth_through >= rank_ + 1;
    return st;
}

std::optional<std::vector<int>> LinearMatroid::min_circuit_index(int e) const {
    std::vector<int> members;
    if (girth_bfs_fits(work())) {
        const GirthHit hit = girth_bfs(work(), e, true);
        cache_->girth[static_cast<std::size_t>(e)].store(
            hit.dist >= 0 ? hit.dist + 1 : kGirthAbsent, std::memory_order_release);
        if (hit.dist < 0) return std::nullopt;
        members = hit.cols;
    } else {
        const auto& label = rep_.labels()[static_cast<std::size_t>(e)];
        bool found = false;
        for (const auto& c : circuits()) {
            if (std::find(c.begin(), c.end(), label) != c.end()) {
                for (const auto& l : c) {
                    const int j = rep_.col_index(l);
                    if (j != e) members.push_back(j);
                }
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    members.push_back(e);
    std::sort(members.begin(), members.end());
    return members;
}

std::optional<std::vector<std::string>> LinearMatroid::min_circuit_through(
    const std::string& e) const {
    auto idx = min_circuit_index(rep_.col_index(e));
    if (!idx) return std::nullopt;
    std::vector<std::string> out;
    out.reserve(idx->size());
    for (int j : *idx) out.push_back(rep_.labels()[static_cast<std::size_t>(j)]);
    return out;
}

std::optional<std::vector<int>> LinearMatroid::spanning_circuit_index(int e) const {
    auto basis = spanning_search(work(), e, rank_, 0);
    if (!basis) return std::nullopt;
    basis->push_back(e);
    std::sort(basis->begin(), basis->end());
    return basis;
}

std::optional<std::vector<std::string>> LinearMatroid::spanning_circuit_through(
    const std::string& e) const {
    auto idx = spanning_circuit_index(rep_.col_index(e));
    if (!idx) return std::nullopt;
    std::vector<std::string> out;
    out.reserve(idx->size());
    for (int j : *idx) out.push_back(rep_.labels()[static_cast<std::size_t>(j)]);
    return out;
}

LinearMatroid LinearMatroid::dual() const {
    const FqMatrix& w = work();
    const FieldSpec& F = w.field();
    const int n = w.cols();
    const int r = rank_;
    const int dr = n - r;

    if (dr == 0) {
        // Every element is a coloop; the dual is all loops.  A single zero
        // row keeps the representation well-formed.
        std::vector<std::vector<Code>> cols(static_cast<std::size_t>(n),
                                            std::vector<Code>(1, 0));
        return LinearMatroid(zip_columns(F, 1, w.labels(), cols));
    }

    const std::vector<int> basis = greedy_basis(w);
    std::vector<int> others;
    {
        std::vector<char> in_basis(static_cast<std::size_t>(n), 0);
        for (int b : basis) in_basis[static_cast<std::size_t>(b)] = 1;
        for (int j = 0; j < n; ++j)
            if (!in_basis[static_cast<std::size_t>(j)]) others.push_back(j);
    }

    GaussState g(F, w.rows());
    for (int b : basis) g.try_insert(w.col(b));

    // Standard pivot: columns coordinates Q over the basis flip to [-Q^T | I],
    // with every element keeping its label and position.
    std::vector<std::vector<Code>> dcols(static_cast<std::size_t>(n),
                                         std::vector<Code>(static_cast<std::size_t>(dr), 0));
    for (int s = 0; s < dr; ++s) {
        const auto coords = g.coords(w.col(others[static_cast<std::size_t>(s)]));
        for (int t = 0; t < r; ++t)
            dcols[static_cast<std::size_t>(basis[static_cast<std::size_t>(t)])]
                 [static_cast<std::size_t>(s)] = F.neg((*coords)[static_cast<std::size_t>(t)]);
        dcols[static_cast<std::size_t>(others[static_cast<std::size_t>(s)])]
             [static_cast<std::size_t>(s)] = 1;
    }
    return LinearMatroid(zip_columns(F, dr, w.labels(), dcols));
}

std::vector<std::vector<std::string>> LinearMatroid::cocircuits(std::optional<int> max_size) const {
    return dual().circuits(max_size);
}

bool LinearMatroid::is_cocircuit(const std::vector<std::string>& members) const {
    if (members.empty()) return false;
    std::vector<char> drop(static_cast<std::size_t>(size()), 0);
    for (const auto& l : members) {
        const int j = rep_.col_index(l);
        if (drop[static_cast<std::size_t>(j)])
            throw PreconditionError("repeated element '" + l + "' in cocircuit test");
        drop[static_cast<std::size_t>(j)] = 1;
    }
    std::vector<std::string> rest;
    for (int j = 0; j < size(); ++j)
        if (!drop[static_cast<std::size_t>(j)])
            rest.push_back(rep_.labels()[static_cast<std::size_t>(j)]);
    return is_hyperplane(rest);
}

LinearMatroid LinearMatroid::restricted(const std::vector<std::string>& keep) const {
    std::vector<int> idx;
    idx.reserve(keep.size());
    for (const auto& l : keep) idx.push_back(rep_.col_index(l));
    std::sort(idx.begin(), idx.end());
    return LinearMatroid(rep_.select(idx));
}

LinearMatroid LinearMatroid::deleted(const std::vector<std::string>& drop) const {
    std::vector<char> gone(static_cast<std::size_t>(size()), 0);
    for (const auto& l : drop) gone[static_cast<std::size_t>(rep_.col_index(l))] = 1;
    std::vector<int> idx;
    for (int j = 0; j < size(); ++j)
        if (!gone[static_cast<std::size_t>(j)]) idx.push_back(j);
    if (idx.empty())
        throw PreconditionError("deletion would empty the ground set");
    return LinearMatroid(rep_.select(idx));
}

bool LinearMatroid::is_hyperplane(const std::vector<std::string>& members) const {
    const FqMatrix& w = work();
    std::vector<char> in(static_cast<std::size_t>(size()), 0);
    GaussState g(w.field(), w.rows());
    for (const auto& l : members) {
        const int j = rep_.col_index(l);
        in[static_cast<std::size_t>(j)] = 1;
        g.try_insert(w.col(j));
    }
    if (g.rank() != rank_ - 1) return false;
    for (int j = 0; j < size(); ++j)
        if (!in[static_cast<std::size_t>(j)] && g.in_span(w.col(j))) return false;
    return true;
}

bool LinearMatroid::is_paving() const {
    auto g = girth();
    return !g || *g >= rank_;
}

bool LinearMatroid::is_sparse_paving() const {
    const bool by_duality = is_paving() && dual().is_paving();
    if (size() <= kEnumColsCap) {
        // Independent criterion: every non-spanning circuit (size <= rank) is
        // a circuit-hyperplane.
        bool by_circuits = true;
        for (const auto& c : circuits(rank_)) {
            if (static_cast<int>(c.size()) != rank_ || !is_hyperplane(c)) {
                by_circuits = false;
                break;
            }
        }
        if (by_circuits != by_duality)
            throw FalsificationError(
                "sparse-paving criteria disagree",
                "duality test: " + std::string(by_duality ? "yes" : "no") +
                    ", circuit-hyperplane test: " + std::string(by_circuits ? "yes" : "no"));
    }
    return by_duality;
}

bool LinearMatroid::is_circuit() const {
    return size() == rank_ + 1 && coloops_.empty();
}

bool LinearMatroid::has_spanning_circuit() const {
    if (rank_ + 1 > size()) return false;
    // A spanning circuit's least element e yields a hit when searching through
    // e among strictly larger columns, so each subset is visited once overall.
    for (int e = 0; e < size(); ++e)
        if (spanning_search(work(), e, rank_, e + 1)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Isomorphism and embedding searches.
// ---------------------------------------------------------------------------

namespace {

// Binary matroids are uniquely representable: A is isomorphic to a restriction
// of B exactly when an invertible row transform carries every column of A onto
// a distinct column of B.  The search assigns images to a column basis of A
// slot by slot; a column whose coordinate support lies inside the assigned
// slots has a forced image vector and immediately claims a matching unused
// column of B.  Columns of B sharing a vector are interchangeable, so greedy
// claiming within each vector class loses nothing.
struct Gf2Embedder {
    const FqMatrix& a;
    const FqMatrix& b;
    int r;
    bool onto;
    std::optional<std::pair<int, int>> anchor;  // a-column -> b-column

    std::vector<int> basis;                  // a-columns, slot s = basis[s]
    std::vector<std::uint32_t> acoord;       // coordinates in assignment-order bits
    std::vector<std::vector<int>> det_at;    // columns forced once d slots are set
    std::vector<std::uint32_t> bmask;
    std::unordered_map<std::uint32_t, std::vector<int>> blookup;

    std::vector<int> claim;
    std::vector<char> used;
    std::vector<std::uint32_t> slot_img;
    std::vector<std::uint32_t> piv, lead;
    std::vector<int> journal;

    Gf2Embedder(const FqMatrix& am, const FqMatrix& bm, int rank,
                std::optional<std::pair<int, int>> anchor_pair, bool require_onto)
        : a(am), b(bm), r(rank), onto(require_onto), anchor(anchor_pair) {}

    std::optional<IsoMapping> run() {
        const FieldSpec& F = a.field();
        const int na = a.cols(), nb = b.cols();

        GaussState g(F, a.rows());
        auto try_basis = [&](int j) {
            if (static_cast<int>(basis.size()) < r && g.try_insert(a.col(j)))
                basis.push_back(j);
        };
        if (anchor) try_basis(anchor->first);
        for (int j = 0; j < na; ++j)
            if (!anchor || j != anchor->first) try_basis(j);

        std::vector<std::uint32_t> raw(static_cast<std::size_t>(na), 0);
        for (int j = 0; j < na; ++j) {
            const auto coords = g.coords(a.col(j));
            for (int t = 0; t < r; ++t)
                if ((*coords)[static_cast<std::size_t>(t)] != 0)
                    raw[static_cast<std::size_t>(j)] |= std::uint32_t{1} << t;
        }

        // Assign the most constraining slots first: each pick maximizes the
        // number of columns whose support becomes fully covered.
        std::vector<int> slot_order;
        {
            std::vector<char> taken(static_cast<std::size_t>(r), 0);
            std::uint32_t covered = 0;
            const bool pin_first = anchor && !basis.empty() && basis[0] == anchor->first;
            if (pin_first) {
                taken[0] = 1;
                covered = 1;
                slot_order.push_back(0);
            }
            while (static_cast<int>(slot_order.size()) < r) {
                int best = -1;
                long best_gain = -1;
                for (int s = 0; s < r; ++s) {
                    if (taken[static_cast<std::size_t>(s)]) continue;
                    const std::uint32_t cov2 = covered | (std::uint32_t{1} << s);
                    long gain = 0;
                    for (int j = 0; j < na; ++j) {
                        const std::uint32_t w = raw[static_cast<std::size_t>(j)];
                        if ((w & ~cov2) == 0 && (w & ~covered) != 0) ++gain;
                    }
                    if (gain > best_gain) {
                        best_gain = gain;
                        best = s;
                    }
                }
                taken[static_cast<std::size_t>(best)] = 1;
                covered |= std::uint32_t{1} << best;
                slot_order.push_back(best);
            }
        }

        // Rewrite coordinates with bit d = raw slot slot_order[d], and bucket
        // each column at the depth where its support closes.
        acoord.assign(static_cast<std::size_t>(na), 0);
        det_at.assign(static_cast<std::size_t>(r) + 1, {});
        std::vector<int> owner(static_cast<std::size_t>(r), -1);
        for (int d = 0; d < r; ++d)
            owner[static_cast<std::size_t>(d)] = basis[static_cast<std::size_t>(slot_order[d])];
        for (int j = 0; j < na; ++j) {
            std::uint32_t w = 0;
            for (int d = 0; d < r; ++d)
                if (raw[static_cast<std::size_t>(j)] & (std::uint32_t{1} << slot_order[d]))
                    w |= std::uint32_t{1} << d;
            acoord[static_cast<std::size_t>(j)] = w;
            det_at[static_cast<std::size_t>(std::bit_width(w))].push_back(j);
        }
        owners_ = std::move(owner);

        bmask.assign(static_cast<std::size_t>(nb), 0);
        for (int c = 0; c < nb; ++c) {
            bmask[static_cast<std::size_t>(c)] = gf2_mask(b, c);
            blookup[bmask[static_cast<std::size_t>(c)]].push_back(c);
        }

        claim.assign(static_cast<std::size_t>(na), -1);
        used.assign(static_cast<std::size_t>(nb), 0);
        slot_img.assign(static_cast<std::size_t>(r), 0);
        if (anchor) used[static_cast<std::size_t>(anchor->second)] = 1;  // reserved

        if (!claim_depth(0)) return std::nullopt;
        if (!dfs(0)) return std::nullopt;

        IsoMapping out;
        for (int j = 0; j < na; ++j)
            out.emplace(a.labels()[static_cast<std::size_t>(j)],
                        b.labels()[static_cast<std::size_t>(claim[static_cast<std::size_t>(j)])]);
        return out;
    }

  private:
    std::vector<int> owners_;

    std::uint32_t image_of(int j) const {
        std::uint32_t v = 0;
        std::uint32_t w = acoord[static_cast<std::size_t>(j)];
        while (w) {
            const int d = std::countr_zero(w);
            w &= w - 1;
            v ^= slot_img[static_cast<std::size_t>(d)];
        }
        return v;
    }

    bool claim_one(int j, int c) {
        claim[static_cast<std::size_t>(j)] = c;
        used[static_cast<std::size_t>(c)] = 1;
        journal.push_back(j);
        return true;
    }

    void undo_to(std::size_t mark) {
        while (journal.size() > mark) {
            const int j = journal.back();
            journal.pop_back();
            const int c = claim[static_cast<std::size_t>(j)];
            claim[static_cast<std::size_t>(j)] = -1;
            if (!(anchor && c == anchor->second))
                used[static_cast<std::size_t>(c)] = 0;
        }
    }

    bool claim_depth(int d) {
        const auto& cols = det_at[static_cast<std::size_t>(d)];
        if (cols.empty()) return true;
        std::map<std::uint32_t, std::vector<int>> groups;
        for (int j : cols) groups[image_of(j)].push_back(j);
        for (const auto& [v, js] : groups) {
            const auto it = blookup.find(v);
            if (it == blookup.end()) return false;
            const auto& pool = it->second;
            std::size_t cursor = 0;
            for (int j : js) {
                if (anchor && j == anchor->first) {
                    if (bmask[static_cast<std::size_t>(anchor->second)] != v ||
                        claim[static_cast<std::size_t>(j)] != -1)
                        return false;
                    claim_one(j, anchor->second);
                    continue;
                }
                int got = -1;
                while (cursor < pool.size()) {
                    const int c = pool[cursor++];
                    if (used[static_cast<std::size_t>(c)]) continue;
                    got = c;
                    break;
                }
                if (got < 0) return false;
                claim_one(j, got);
            }
        }
        return true;
    }

    bool dfs(int d) {
        if (d == r) return true;
        const int slot_owner = owners_[static_cast<std::size_t>(d)];
        const bool owner_is_anchor = anchor && slot_owner == anchor->first;
        for (int c = 0; c < b.cols(); ++c) {
            if (owner_is_anchor) {
                if (c != anchor->second) continue;
            } else if (used[static_cast<std::size_t>(c)]) {
                continue;
            }
            std::uint32_t v = bmask[static_cast<std::size_t>(c)];
            for (std::size_t t = 0; t < piv.size(); ++t)
                if (v & lead[t]) v ^= piv[t];
            if (v == 0) continue;  // image must stay independent
            slot_img[static_cast<std::size_t>(d)] = bmask[static_cast<std::size_t>(c)];
            piv.push_back(v);
            lead.push_back(v & (0u - v));
            const std::size_t mark = journal.size();
            if (claim_depth(d + 1) && dfs(d + 1)) return true;
            undo_to(mark);
            piv.pop_back();
            lead.pop_back();
            if (owner_is_anchor) break;
        }
        return false;
    }
};

// Rank-comparison backtracking for non-binary representations: map elements
// one at a time, prune on coloop/girth profiles, pairwise and triple ranks,
// and prefix rank, then verify every subset of size <= rank at the leaf.
struct GenericIso {
    const LinearMatroid& A;
    const LinearMatroid& B;
    std::optional<std::pair<int, int>> anchor;
    int n;
    std::vector<int> order;
    std::vector<int> image;
    std::vector<char> used;
    std::vector<std::pair<bool, int>> prof_a, prof_b;  // (coloop, girth or 0)

    GenericIso(const LinearMatroid& am, const LinearMatroid& bm,
               std::optional<std::pair<int, int>> anchor_pair)
        : A(am), B(bm), anchor(anchor_pair), n(am.size()),
          image(static_cast<std::size_t>(n), -1),
          used(static_cast<std::size_t>(n), 0) {}

    static std::vector<std::pair<bool, int>> profiles(const LinearMatroid& M) {
        std::vector<std::pair<bool, int>> out;
        out.reserve(static_cast<std::size_t>(M.size()));
        const auto& labels = M.ground_set();
        for (int j = 0; j < M.size(); ++j) {
            const auto st = M.element_status(labels[static_cast<std::size_t>(j)]);
            out.emplace_back(st.is_coloop, st.girth_through.value_or(0));
        }
        return out;
    }

    std::optional<IsoMapping> run() {
        prof_a = profiles(A);
        prof_b = profiles(B);
        {
            auto sa = prof_a, sb = prof_b;
            std::sort(sa.begin(), sa.end());
            std::sort(sb.begin(), sb.end());
            if (sa != sb) return std::nullopt;
        }
        order.clear();
        if (anchor) order.push_back(anchor->first);
        for (int j = 0; j < n; ++j)
            if (!anchor || j != anchor->first) order.push_back(j);
        if (!dfs(0)) return std::nullopt;
        IsoMapping out;
        for (int j = 0; j < n; ++j)
            out.emplace(A.ground_set()[static_cast<std::size_t>(j)],
                        B.ground_set()[static_cast<std::size_t>(image[static_cast<std::size_t>(j)])]);
        return out;
    }

  private:
    int rank_a(const std::vector<int>& idx) const { return rank_of(A.rep(), idx); }
    int rank_b(const std::vector<int>& idx) const { return rank_of(B.rep(), idx); }

    bool compatible(int k, int x, int y) const {
        std::vector<int> sa, sb;
        // pairs and triples against everything already placed
        for (int t1 = 0; t1 < k; ++t1) {
            const int u = order[static_cast<std::size_t>(t1)];
            const int fu = image[static_cast<std::size_t>(u)];
            sa = {u, x};
            sb = {fu, y};
            if (rank_a(sa) != rank_b(sb)) return false;
            for (int t2 = t1 + 1; t2 < k; ++t2) {
                const int v = order[static_cast<std::size_t>(t2)];
                const int fv = image[static_cast<std::size_t>(v)];
                sa = {u, v, x};
                sb = {fu, fv, y};
                if (rank_a(sa) != rank_b(sb)) return false;
            }
        }
        sa.clear();
        sb.clear();
        for (int t = 0; t < k; ++t) {
            sa.push_back(order[static_cast<std::size_t>(t)]);
            sb.push_back(image[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
        }
        sa.push_back(x);
        sb.push_back(y);
        return rank_a(sa) == rank_b(sb);
    }

    bool verify_leaf() const {
        // Rank agreement on every subset of size <= rank pins the matroid.
        const int cap = std::min(n, A.rank());
        std::vector<int> sa, sb;
        for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
            if (std::popcount(mask) > cap) continue;
            sa.clear();
            sb.clear();
            for (int j = 0; j < n; ++j)
                if (mask & (std::uint32_t{1} << j)) {
                    sa.push_back(j);
                    sb.push_back(image[static_cast<std::size_t>(j)]);
                }
            if (rank_a(sa) != rank_b(sb)) return false;
        }
        return true;
    }

    bool dfs(int k) {
        if (k == n) return verify_leaf();
        const int x = order[static_cast<std::size_t>(k)];
        for (int y = 0; y < n; ++y) {
            if (used[static_cast<std::size_t>(y)]) continue;
            if (anchor && x == anchor->first && y != anchor->second) continue;
            if (prof_a[static_cast<std::size_t>(x)] != prof_b[static_cast<std::size_t>(y)]) continue;
            if (!compatible(k, x, y)) continue;
            image[static_cast<std::size_t>(x)] = y;
            used[static_cast<std::size_t>(y)] = 1;
            if (dfs(k + 1)) return true;
            image[static_cast<std::size_t>(x)] = -1;
            used[static_cast<std::size_t>(y)] = 0;
        }
        return false;
    }
};

}  // namespace

std::optional<IsoMapping> iso_check(const LinearMatroid& a, const LinearMatroid& b,
                                    std::optional<std::pair<std::string, std::string>> anchor) {
    const int cap = anchor ? kIsoAnchoredCap : kIsoPlainCap;
    if (a.size() > cap || b.size() > cap)
        throw ResourceError("isomorphism test over " +
                            std::to_string(std::max(a.size(), b.size())) +
                            " elements exceeds the " + std::to_string(cap) +
                            "-element ceiling");
    std::optional<std::pair<int, int>> anchor_idx;
    if (anchor)
        anchor_idx = {a.rep().col_index(anchor->first), b.rep().col_index(anchor->second)};
    if (a.size() != b.size() || a.rank() != b.rank()) return std::nullopt;

    if (a.q() == 2 && b.q() == 2) {
        Gf2Embedder search(a.rep(), b.rep(), a.rank(), anchor_idx, /*require_onto=*/true);
        return search.run();
    }
    if (a.q() != b.q()) return std::nullopt;
    GenericIso search(a, b, anchor_idx);
    return search.run();
}

std::optional<IsoMapping> embeds_into(const LinearMatroid& m, const LinearMatroid& f,
                                      std::optional<std::pair<std::string, std::string>> anchor) {
    if (m.q() != 2 || f.q() != 2)
        throw PreconditionError("embedding test requires binary representations");
    if (m.rank() != f.rank())
        throw PreconditionError("embedding test requires equal ranks (" +
                                std::to_string(m.rank()) + " vs " +
                                std::to_string(f.rank()) + ")");
    const int cap = anchor ? kIsoAnchoredCap : kIsoPlainCap;
    if (m.size() > cap || f.size() > cap)
        throw ResourceError("embedding test over " +
                            std::to_string(std::max(m.size(), f.size())) +
                            " elements exceeds the " + std::to_string(cap) +
                            "-element ceiling");
    std::optional<std::pair<int, int>> anchor_idx;
    if (anchor)
        anchor_idx = {m.rep().col_index(anchor->first), f.rep().col_index(anchor->second)};
    if (m.size() > f.size()) return std::nullopt;

    Gf2Embedder search(m.rep(), f.rep(), m.rank(), anchor_idx, /*require_onto=*/false);
    return search.run();
}

}  // namespace fqm
