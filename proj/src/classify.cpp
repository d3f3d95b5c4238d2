#include "fqm/classify.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "fqm/errors.hpp"
#include "fqm/gfq.hpp"
#include "fqm/matvec.hpp"

namespace fqm {

namespace {

// First ground-set column outside the span of `inside`; the caller
// guarantees one exists (the inside labels span a proper subspace).
std::string column_outside_span(const LinearMatroid& m, const std::vector<std::string>& inside) {
    const FqMatrix& rep = m.rep();
    GaussState g(rep.field(), rep.rows());
    for (const auto& l : inside) g.try_insert(rep.col(rep.col_index(l)));
    for (int j = 0; j < rep.cols(); ++j) {
        if (std::find(inside.begin(), inside.end(), rep.label(j)) != inside.end()) continue;
        if (!g.in_span(rep.col(j))) return rep.label(j);
    }
    throw PreconditionError("no column lies outside the given span");
}

struct PairSupports {
    std::vector<std::string> labels;
    std::vector<std::array<int, 2>> pairs;
};

// Supports that pairwise meet in exactly one index either pass through a
// common index (star; always the case for <= 2 of them) or close a triangle
// of exactly three.  Returns true for the star.  Any other layout breaks
// the loose-element pattern.
bool is_star(const std::string& e, const PairSupports& s) {
    const auto& p = s.pairs;
    for (size_t i = 0; i < p.size(); ++i) {
        for (size_t j = i + 1; j < p.size(); ++j) {
            int shared = (p[i][0] == p[j][0]) + (p[i][0] == p[j][1]) + (p[i][1] == p[j][0]) +
                         (p[i][1] == p[j][1]);
            if (shared != 1)
                throw ContradictionError("supports of '" + s.labels[i] + "' and '" + s.labels[j] +
                                             "' share " + std::to_string(shared) + " indices",
                                         s.labels[i], s.labels[j]);
        }
    }
    if (p.size() <= 1) return true;
    for (int t : {p[0][0], p[0][1]}) {
        bool all = true;
        for (const auto& pr : p)
            if (pr[0] != t && pr[1] != t) {
                all = false;
                break;
            }
        if (all) return true;
    }
    if (p.size() == 3) return false;
    throw ContradictionError("supports neither share a common index nor close a triangle", e,
                             s.labels.front());
}

std::string fmt_column(const StandardRep& rep, const std::string& label) {
    int j = rep.base.col_index(label);
    std::string out = label + " = (";
    for (int i = 0; i < rep.base.rows(); ++i) {
        if (i) out += ',';
        out += std::to_string(static_cast<int>(rep.base.at(i, j)));
    }
    return out + ")";
}

}  // namespace

BinaryLooseVerdict classify_binary_loose(const LinearMatroid& m, const std::string& e) {
    (void)m.rep().col_index(e);
    if (m.q() != 2)
        throw PreconditionError("loose-element classification needs a binary representation");
    if (!m.is_simple())
        throw PreconditionError("loose-element classification needs a simple matroid");
    if (!m.coloops().empty())
        throw PreconditionError("loose-element classification needs a coloop-free matroid");
    const int r = m.rank();
    if (r < 3) throw PreconditionError("loose-element classification needs rank >= 3");

    if (auto sc = m.spanning_circuit_through(e)) {
        // e is the sum of the frame basis; every other column must be a
        // weight-2 frame vector, and their supports cross star- or
        // triangle-wise.
        std::vector<std::string> basis;
        for (const auto& l : *sc)
            if (l != e) basis.push_back(l);
        StandardRep frame = standard_rep(m.rep(), basis);
        if (static_cast<int>(column_support(frame, e).size()) != r)
            throw ContradictionError("spanning-circuit frame does not cover the element", e, e);
        PairSupports s;
        for (const auto& l : m.ground_set()) {
            if (l == e || std::find(basis.begin(), basis.end(), l) != basis.end()) continue;
            auto sup = column_support(frame, l);
            if (sup.size() != 2)
                throw ContradictionError("column '" + l + "' has frame weight " +
                                             std::to_string(sup.size()) + ", expected 2",
                                         e, l);
            s.labels.push_back(l);
            s.pairs.push_back({sup[0], sup[1]});
        }
        if (is_star(e, s)) {
            BuiltFamily ref = build_figure(Family::Mr, r);
            auto w = embeds_into(m, ref.matroid, std::make_pair(e, ref.designated));
            if (!w)
                throw ContradictionError("star pattern does not embed into the doubled frame", e,
                                         e);
            return {BinaryCase::Spanning, BinaryFamily::MrRestriction, *w};
        }
        BuiltFamily ref = (r == 3) ? build_named(Family::Fano) : build_figure(Family::Lr, r);
        auto w = iso_check(m, ref.matroid, std::make_pair(e, ref.designated));
        if (!w)
            throw ContradictionError(
                "triangle pattern is not the expected rank-" + std::to_string(r) + " instance", e,
                e);
        return {BinaryCase::Spanning, BinaryFamily::Lr, *w};
    }

    // No spanning circuit: the smallest circuit through e must have size
    // exactly r, and a root column completes it to a frame in which every
    // extra column is weight 3 through the root.
    auto mc = m.min_circuit_through(e);
    if (!mc) throw ContradictionError("no circuit passes through the element", e, e);
    if (static_cast<int>(mc->size()) != r)
        throw ContradictionError("smallest circuit through the element has size " +
                                     std::to_string(mc->size()) + " at rank " + std::to_string(r),
                                 e, e);
    std::vector<std::string> tail;
    for (const auto& l : *mc)
        if (l != e) tail.push_back(l);
    std::vector<std::string> basis;
    basis.push_back(column_outside_span(m, tail));
    basis.insert(basis.end(), tail.begin(), tail.end());
    StandardRep frame = standard_rep(m.rep(), basis);
    auto esup = column_support(frame, e);
    if (static_cast<int>(esup.size()) != r - 1 || esup.front() == 0)
        throw ContradictionError("circuit frame does not isolate the root from the element", e, e);
    PairSupports s;
    for (const auto& l : m.ground_set()) {
        if (l == e || std::find(basis.begin(), basis.end(), l) != basis.end()) continue;
        auto sup = column_support(frame, l);
        if (sup.size() != 3 || sup.front() != 0)
            throw ContradictionError("column '" + l + "' misses the weight-3 root shape", e, l);
        s.labels.push_back(l);
        s.pairs.push_back({sup[1], sup[2]});
    }
    if (is_star(e, s)) {
        BuiltFamily ref = build_figure(Family::Nr, r);
        auto w = embeds_into(m, ref.matroid, std::make_pair(e, ref.designated));
        if (!w)
            throw ContradictionError("root-star pattern does not embed into the doubled frame", e,
                                     e);
        return {BinaryCase::Nonspanning, BinaryFamily::NrRestriction, *w};
    }
    BuiltFamily ref = build_figure(Family::Jr, r);
    auto w = iso_check(m, ref.matroid, std::make_pair(e, ref.designated));
    if (!w)
        throw ContradictionError(
            "root-triangle pattern is not the expected rank-" + std::to_string(r) + " instance", e,
            e);
    return {BinaryCase::Nonspanning, BinaryFamily::Jr, *w};
}

long ternary_size_bound(int r) {
    if (r < 5) throw PreconditionError("the ternary size bound starts at rank 5");
    return std::max(41L * r - 101, 35L * (r - 1)) / 2;
}

CensusCaps census_caps(int r) {
    if (r < 5) throw PreconditionError("census ceilings start at rank 5");
    return {(r - 1) / 2, 2 * r - 2, 12 * r - 40, 12 * r - 42, 8 * r - 34};
}

ColumnCensus ternary_census(const LinearMatroid& m, const std::string& e, bool strict) {
    (void)m.rep().col_index(e);
    if (m.q() != 3) throw PreconditionError("the column census needs a ternary representation");
    if (!m.is_simple()) throw PreconditionError("the column census needs a simple matroid");
    if (!m.coloops().empty())
        throw PreconditionError("the column census needs a coloop-free matroid");
    const int r = m.rank();
    if (r < 5) throw PreconditionError("the column census needs rank >= 5");
    auto mc = m.min_circuit_through(e);
    if (!mc || static_cast<int>(mc->size()) != r)
        throw PreconditionError("the smallest circuit through '" + e +
                                "' must have size exactly the rank");

    std::vector<std::string> tail;
    for (const auto& l : *mc)
        if (l != e) tail.push_back(l);
    std::vector<std::string> basis;
    basis.push_back(column_outside_span(m, tail));
    basis.insert(basis.end(), tail.begin(), tail.end());
    StandardRep frame = scale_normalize(standard_rep(m.rep(), basis), e, ScaleMode::TopZeroRestOnes);

    const FieldSpec& F = frame.base.field();
    ColumnCensus out;
    out.rank = r;
    out.circuit = *mc;
    out.size_bound = ternary_size_bound(r);
    for (const auto& l : m.ground_set()) {
        if (l == e || std::find(basis.begin(), basis.end(), l) != basis.end()) continue;
        int j = frame.base.col_index(l);
        Code top = frame.base.at(0, j);
        auto root = root_entries(frame, l);
        if (top == 0) {
            ++out.top_zero;
            // must be a difference of two frame columns: two nonzero root
            // entries summing to zero
            std::vector<Code> nz;
            for (Code c : root)
                if (c != 0) nz.push_back(c);
            bool ok = nz.size() == 2 && F.add(nz[0], nz[1]) == 0;
            if (!ok) {
                if (strict)
                    throw FalsificationError("frame-hyperplane column is not a signed difference",
                                             fmt_column(frame, l));
                ++out.overflow;
            }
            continue;
        }
        // scale so the top entry reads 1, then count signed root entries
        Code f = F.inv(top);
        int plus = 0, minus = 0;
        for (Code c : root) {
            Code v = F.mul(c, f);
            if (v == 1) ++plus;
            if (v == 2) ++minus;
        }
        if (plus > 2 || minus > 2) {
            if (strict)
                throw FalsificationError("column carries more than two root entries of one sign",
                                         fmt_column(frame, l));
            ++out.overflow;
            continue;
        }
        ++out.type[plus + minus];
    }
    return out;
}

TwoLooseReport two_loose_audit(const LinearMatroid& m, const std::string& e, const std::string& f,
                               bool verify_loose) {
    (void)m.rep().col_index(e);
    (void)m.rep().col_index(f);
    if (e == f) throw PreconditionError("the two-loose audit needs two distinct elements");
    if (verify_loose) {
        for (const auto& x : {e, f})
            if (!m.element_status(x).is_loose)
                throw PreconditionError("'" + x + "' is not loose");
    }
    const int r = m.rank();
    const int q = m.q();
    TwoLooseReport rep;
    rep.rank = r;
    rep.q = q;
    if (m.is_cocircuit({e, f})) {
        rep.outcome = TwoLooseOutcome::CocircuitPair;
        return rep;
    }
    // spanning circuit through one element that avoids the other; a rank
    // drop after deletion means none can exist on that side
    auto one_side = [&](const std::string& thru, const std::string& avoid) {
        LinearMatroid del = m.deleted({avoid});
        return del.rank() == r && del.spanning_circuit_through(thru).has_value();
    };
    rep.spanning_one_side = one_side(e, f) || one_side(f, e);
    if (r <= 2 * q) {
        rep.outcome = TwoLooseOutcome::RankOk;
        if (rep.spanning_one_side && r > 2 * q - 1)
            throw FalsificationError(
                "a spanning circuit through exactly one loose element caps the rank at 2q-1",
                "rank " + std::to_string(r) + " over GF(" + std::to_string(q) + ")");
        return rep;
    }
    rep.outcome = TwoLooseOutcome::Violation;
    return rep;
}

PavingReport paving_audit(const LinearMatroid& m, bool verify_paving) {
    if (verify_paving) {
        if (!m.is_paving()) throw PreconditionError("the paving audit needs a paving matroid");
        if (!m.coloops().empty())
            throw PreconditionError("the paving audit needs a coloop-free matroid");
    }
    PavingReport rep;
    rep.rank = m.rank();
    rep.size = m.size();
    rep.q = m.q();
    rep.sparse_paving = m.is_sparse_paving();
    rep.has_spanning_circuit = m.has_spanning_circuit();
    rep.rank_eq_2q = rep.rank == 2 * rep.q;
    if (m.is_circuit()) {
        rep.cls = PavingClass::Circuit;
        return rep;
    }
    if (rep.rank <= rep.q) {
        rep.cls = PavingClass::RankLeQ;
        return rep;
    }
    rep.cls = PavingClass::SparsePaving;
    std::string where = "rank " + std::to_string(rep.rank) + ", " + std::to_string(rep.size) +
                        " elements over GF(" + std::to_string(rep.q) + ")";
    if (rep.rank > 2 * rep.q)
        throw FalsificationError("a paving non-circuit caps the rank at 2q", where);
    if (rep.rank_eq_2q && rep.has_spanning_circuit)
        throw FalsificationError("rank 2q rules out spanning circuits", where);
    if (!rep.sparse_paving)
        throw FalsificationError("rank above q forces sparse paving", where);
    if (rep.size > 4 * rep.q)
        throw FalsificationError("rank above q caps the ground set at 4q", where);
    return rep;
}

FreeStructure free_structure_check(const LinearMatroid& m, const std::string& e,
                                   bool verify_free) {
    (void)m.rep().col_index(e);
    if (!m.is_simple()) throw PreconditionError("free-element analysis needs a simple matroid");
    if (!m.coloops().empty())
        throw PreconditionError("free-element analysis needs a coloop-free matroid");
    if (verify_free) {
        auto g = m.girth_through(e);
        if (!g || *g != m.rank() + 1) throw PreconditionError("'" + e + "' is not free");
    }
    if (m.q() == 2) {
        if (!m.is_circuit())
            throw FalsificationError("a free element over GF(2) forces a circuit",
                                     std::to_string(m.size()) + " elements at rank " +
                                         std::to_string(m.rank()));
        return {FreeShape::Circuit, 0, m.ground_set()};
    }
    if (m.q() != 3)
        throw PreconditionError("free-element structure analysis covers GF(2) and GF(3)");

    std::optional<LinearMatroid> owned;
    const LinearMatroid* cur = &m;
    int petals = 0;
    int counter = 0;
    while (true) {
        if (cur->is_circuit())
            return {petals ? FreeShape::TwoSumTree : FreeShape::Circuit, petals,
                    cur->ground_set()};
        if (petals == 0 && cur->size() == 4 && cur->rank() == 2 &&
            iso_check(*cur, build_uniform(2, 4, 3).matroid))
            return {FreeShape::U24, 0, cur->ground_set()};

        // peel one four-point-line petal: a 3-circuit avoiding e whose span
        // meets the span of the rest in the attachment point
        std::vector<std::string> petal;
        for (const auto& c : cur->circuits(3)) {
            if (c.size() == 3 && std::find(c.begin(), c.end(), e) == c.end()) {
                petal = c;
                break;
            }
        }
        if (petal.empty())
            throw FalsificationError("the core is not a circuit and no line peels off",
                                     std::to_string(cur->size()) + " elements at rank " +
                                         std::to_string(cur->rank()));
        const FqMatrix& rep = cur->rep();
        const FieldSpec& F = rep.field();
        GaussState rest(F, rep.rows());
        std::vector<std::pair<std::string, std::vector<Code>>> keep;
        for (int j = 0; j < rep.cols(); ++j) {
            if (std::find(petal.begin(), petal.end(), rep.label(j)) != petal.end()) continue;
            rest.try_insert(rep.col(j));
            keep.emplace_back(rep.label(j),
                              std::vector<Code>(rep.col(j).begin(), rep.col(j).end()));
        }
        auto t1 = rep.col(rep.col_index(petal[0]));
        auto t2 = rep.col(rep.col_index(petal[1]));
        std::vector<Code> attach;
        for (Code a = 0; a < 3 && attach.empty(); ++a) {
            for (Code b = 0; b < 3; ++b) {
                if (a == 0 && b == 0) continue;
                std::vector<Code> v(rep.rows());
                for (int i = 0; i < rep.rows(); ++i)
                    v[i] = F.add(F.mul(a, t1[i]), F.mul(b, t2[i]));
                if (rest.in_span(v)) {
                    attach = std::move(v);
                    break;
                }
            }
        }
        if (attach.empty())
            throw FalsificationError("a peeled line does not attach to the rest",
                                     petal[0] + " " + petal[1] + " " + petal[2]);
        std::string fresh = "d" + std::to_string(++counter);
        while (rep.has_label(fresh)) fresh += "'";
        keep.emplace_back(fresh, std::move(attach));
        FqMatrix next = FqMatrix::from_columns(F, rep.rows(), keep);
        owned.emplace(std::move(next));
        cur = &*owned;
        ++petals;
    }
}

}  // namespace fqm
