#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "fqm/families.hpp"
#include "fqm/matroid.hpp"
#include "oracles.hpp"

using namespace fqm;

namespace {

FqMatrix random_matrix(std::mt19937& g, const FieldSpec& F, int rows, int cols) {
    std::vector<Code> data(static_cast<size_t>(rows) * cols);
    for (auto& c : data) c = static_cast<Code>(g() % static_cast<unsigned>(F.q()));
    std::vector<std::string> labels;
    for (int j = 1; j <= cols; ++j) labels.push_back("c" + std::to_string(j));
    return FqMatrix(F, rows, std::move(labels), std::move(data));
}

// label lists -> sorted index lists, for comparison with the oracle
std::set<std::vector<int>> as_index_sets(const FqMatrix& m,
                                         const std::vector<std::vector<std::string>>& families) {
    std::set<std::vector<int>> out;
    for (const auto& f : families) {
        std::vector<int> ix;
        for (const auto& l : f) ix.push_back(m.col_index(l));
        std::sort(ix.begin(), ix.end());
        out.insert(ix);
    }
    return out;
}

std::set<std::vector<int>> sorted_sets(std::vector<std::vector<int>> v) {
    std::set<std::vector<int>> out;
    for (auto& s : v) {
        std::sort(s.begin(), s.end());
        out.insert(s);
    }
    return out;
}

}  // namespace

TEST_CASE("rank, simplicity, and coloops on hand-built matrices") {
    const FieldSpec F = make_field(3);
    // zero column = loop, d parallel to a (projective equality 2*(1,2) = (2,1)? no: 2*(1,2)=(2,4=1)),
    // f a coloop (only column touching row 2)
    FqMatrix m = FqMatrix::from_columns(F, 3, {{"a", {1, 2, 0}},
                                               {"b", {0, 0, 0}},
                                               {"d", {2, 1, 0}},
                                               {"f", {0, 0, 1}}});
    LinearMatroid M(std::move(m));
    CHECK(M.rank() == 2);
    CHECK(M.size() == 4);
    CHECK(!M.is_simple());  // loop b, parallel pair {a,d}
    CHECK(M.coloops() == std::vector<std::string>{"f"});
    CHECK(M.q() == 3);

    LinearMatroid S(FqMatrix::from_columns(F, 2, {{"a", {1, 0}}, {"b", {0, 1}}, {"d", {1, 1}}}));
    CHECK(S.is_simple());
    CHECK(S.coloops().empty());
}

TEST_CASE("circuit enumeration matches the subset oracle on random matroids") {
    std::mt19937 g(8101);
    for (int q : {2, 3}) {
        CAPTURE(q);
        const FieldSpec F = make_field(q);
        int done = 0;
        while (done < 25) {
            int rows = 2 + static_cast<int>(g() % 3);
            int cols = rows + 1 + static_cast<int>(g() % 3);  // <= 7
            FqMatrix m = random_matrix(g, F, rows, cols);
            LinearMatroid M{FqMatrix(m)};
            auto expect = sorted_sets(oracle::circuits_by_enumeration(m));
            auto got = as_index_sets(m, M.circuits());
            CHECK(got == expect);
            ++done;
        }
    }
}

TEST_CASE("per-element girth and looseness match the circuit oracle") {
    std::mt19937 g(8102);
    for (int q : {2, 3}) {
        CAPTURE(q);
        const FieldSpec F = make_field(q);
        for (int trial = 0; trial < 25; ++trial) {
            int rows = 2 + static_cast<int>(g() % 3);
            FqMatrix m = random_matrix(g, F, rows, rows + 2);
            LinearMatroid M{FqMatrix(m)};
            auto circuits = oracle::circuits_by_enumeration(m);
            std::optional<int> girth;
            for (const auto& c : circuits)
                if (!girth || static_cast<int>(c.size()) < *girth) girth = static_cast<int>(c.size());
            CHECK(M.girth() == girth);
            for (int e = 0; e < m.cols(); ++e) {
                const std::string& label = m.label(e);
                ElementStatus st = M.element_status(label);
                CHECK(st.girth_through == oracle::girth_through_by_circuits(circuits, e));
                CHECK(st.is_coloop == !st.girth_through.has_value());
                CHECK(st.is_loose == oracle::loose_by_circuits(circuits, e, M.rank()));
                if (st.is_free) CHECK(st.is_loose);
                bool free_expected = !st.girth_through || *st.girth_through == M.rank() + 1;
                CHECK(st.is_free == free_expected);
            }
        }
    }
}

TEST_CASE("minimal and spanning circuit witnesses are genuine circuits") {
    std::mt19937 g(8103);
    const FieldSpec F = make_field(3);
    for (int trial = 0; trial < 20; ++trial) {
        FqMatrix m = random_matrix(g, F, 3, 6);
        LinearMatroid M{FqMatrix(m)};
        auto circuits = sorted_sets(oracle::circuits_by_enumeration(m));
        for (int e = 0; e < m.cols(); ++e) {
            const std::string& label = m.label(e);
            auto mc = M.min_circuit_through(label);
            auto gt = M.girth_through(label);
            CHECK(mc.has_value() == gt.has_value());
            if (mc) {
                CHECK(static_cast<int>(mc->size()) == *gt);
                CHECK(std::count(mc->begin(), mc->end(), label) == 1);
                std::vector<int> ix;
                for (const auto& l : *mc) ix.push_back(m.col_index(l));
                std::sort(ix.begin(), ix.end());
                CHECK(circuits.count(ix) == 1);
            }
            auto sc = M.spanning_circuit_through(label);
            bool oracle_has = false;
            for (const auto& c : circuits)
                if (static_cast<int>(c.size()) == M.rank() + 1 &&
                    std::count(c.begin(), c.end(), e))
                    oracle_has = true;
            CHECK(sc.has_value() == oracle_has);
            if (sc) {
                CHECK(static_cast<int>(sc->size()) == M.rank() + 1);
                std::vector<int> ix;
                for (const auto& l : *sc) ix.push_back(m.col_index(l));
                std::sort(ix.begin(), ix.end());
                CHECK(circuits.count(ix) == 1);
            }
        }
    }
}

TEST_CASE("duality: complementary ranks, involution, cocircuits as dual circuits") {
    std::mt19937 g(8104);
    for (int q : {2, 3, 4}) {
        CAPTURE(q);
        const FieldSpec F = make_field(q);
        for (int trial = 0; trial < 15; ++trial) {
            FqMatrix m = random_matrix(g, F, 3, 6);
            LinearMatroid M{FqMatrix(m)};
            LinearMatroid D = M.dual();
            CHECK(D.size() == M.size());
            CHECK(D.rank() == M.size() - M.rank());
            CHECK(D.ground_set() == M.ground_set());
            // involution up to circuit equivalence
            LinearMatroid DD = D.dual();
            CHECK(as_index_sets(DD.rep(), DD.circuits()) == as_index_sets(m, M.circuits()));
            // cocircuits = circuits of the dual
            CHECK(as_index_sets(m, M.cocircuits()) == as_index_sets(D.rep(), D.circuits()));
            for (const auto& cc : M.cocircuits()) CHECK(M.is_cocircuit(cc));
            // direct cocircuit test rejects padded sets
            auto ccs = M.cocircuits();
            if (!ccs.empty()) {
                auto padded = ccs[0];
                for (const auto& l : M.ground_set())
                    if (!std::count(padded.begin(), padded.end(), l)) {
                        padded.push_back(l);
                        break;
                    }
                if (padded.size() > ccs[0].size()) CHECK(!M.is_cocircuit(padded));
            }
        }
    }
}

TEST_CASE("restriction and deletion keep exactly the named columns") {
    auto fano = build_named(Family::Fano);
    const LinearMatroid& M = fano.matroid;
    LinearMatroid R = M.restricted({"b1", "b2", "b3", "g4"});
    CHECK(R.size() == 4);
    CHECK(R.rank() == 3);
    CHECK(R.is_circuit());
    LinearMatroid D = M.deleted({"g4"});
    CHECK(D.size() == M.size() - 1);
    CHECK(!D.rep().has_label("g4"));
    CHECK_THROWS_AS(M.restricted({"nope"}), PreconditionError);
    CHECK_THROWS_AS(M.deleted({"nope"}), PreconditionError);
}

TEST_CASE("hyperplane and paving predicates against first principles") {
    std::mt19937 g(8105);
    const FieldSpec F = make_field(2);
    for (int trial = 0; trial < 25; ++trial) {
        FqMatrix m = random_matrix(g, F, 3, 6);
        LinearMatroid M{FqMatrix(m)};
        if (M.rank() < 2) continue;
        auto circuits = oracle::circuits_by_enumeration(m);
        CHECK(M.is_paving() == oracle::paving_by_circuits(circuits, M.rank()));

        // hyperplanes: rank r-1 and closed (adding any outside element grows the rank)
        const auto ground = M.ground_set();
        for (std::uint32_t s = 0; s < (1u << M.size()); ++s) {
            std::vector<std::string> sub;
            for (int j = 0; j < M.size(); ++j)
                if (s >> j & 1u) sub.push_back(ground[static_cast<size_t>(j)]);
            bool hyper = M.rank_of_subset(sub) == M.rank() - 1;
            if (hyper)
                for (const auto& l : ground)
                    if (!std::count(sub.begin(), sub.end(), l)) {
                        auto grown = sub;
                        grown.push_back(l);
                        if (M.rank_of_subset(grown) == M.rank() - 1) hyper = false;
                    }
            CHECK(M.is_hyperplane(sub) == hyper);
        }
        if (trial >= 4) break;  // the 2^n hyperplane sweep is enough on a few instances
    }
}

TEST_CASE("sparse paving agrees with the circuit-hyperplane criterion") {
    std::mt19937 g(8106);
    for (int q : {2, 3}) {
        const FieldSpec F = make_field(q);
        for (int trial = 0; trial < 30; ++trial) {
            FqMatrix m = random_matrix(g, F, 3, 5 + static_cast<int>(g() % 3));
            LinearMatroid M{FqMatrix(m)};
            bool expect = M.is_paving();
            if (expect)
                for (const auto& c : M.circuits())
                    if (static_cast<int>(c.size()) <= M.rank() && !M.is_hyperplane(c)) expect = false;
            CHECK(M.is_sparse_paving() == expect);
        }
    }
    CHECK(build_named(Family::AG32).matroid.is_sparse_paving());
    CHECK(build_named(Family::Golay12).matroid.is_sparse_paving());
}

TEST_CASE("whole-ground-set circuits and spanning-circuit detection") {
    auto c = build_circuit_uniform(4, 3);
    CHECK(c.matroid.is_circuit());
    CHECK(c.matroid.has_spanning_circuit());
    auto u = build_uniform(2, 4, 3);
    CHECK(!u.matroid.is_circuit());
    CHECK(u.matroid.has_spanning_circuit());
    auto ag = build_named(Family::AG32);
    CHECK(!ag.matroid.is_circuit());
    CHECK(!ag.matroid.has_spanning_circuit());
}

TEST_CASE("rank function is submodular on random subset pairs") {
    std::mt19937 g(8107);
    for (int q : {2, 3}) {
        const FieldSpec F = make_field(q);
        FqMatrix m = random_matrix(g, F, 4, 8);
        LinearMatroid M{FqMatrix(m)};
        const auto ground = M.ground_set();
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<std::string> a, b, uni, inter;
            for (const auto& l : ground) {
                bool ina = g() % 2, inb = g() % 2;
                if (ina) a.push_back(l);
                if (inb) b.push_back(l);
                if (ina || inb) uni.push_back(l);
                if (ina && inb) inter.push_back(l);
            }
            CHECK(M.rank_of_subset(a) + M.rank_of_subset(b) >=
                  M.rank_of_subset(uni) + M.rank_of_subset(inter));
        }
    }
}

TEST_CASE("isomorphism search finds genuine maps and refuses impostors") {
    auto fano = build_named(Family::Fano);

    // relabeled, column-permuted, row-operated copy of the Fano plane
    const FieldSpec F = make_field(2);
    const FqMatrix& fm = fano.matroid.rep();
    std::vector<std::pair<std::string, std::vector<Code>>> cols;
    std::vector<int> perm = {3, 0, 6, 2, 5, 1, 4};
    for (size_t t = 0; t < perm.size(); ++t) {
        std::vector<Code> v;
        for (int i = 0; i < 3; ++i) v.push_back(fm.at(i, perm[t]));
        std::swap(v[0], v[2]);  // a row swap is an invertible row operation
        cols.emplace_back("p" + std::to_string(t + 1), std::move(v));
    }
    LinearMatroid other(FqMatrix::from_columns(F, 3, cols));

    auto iso = iso_check(fano.matroid, other);
    REQUIRE(iso.has_value());
    // the witness preserves subset ranks; spot-check all triples
    const auto ga = fano.matroid.ground_set();
    for (size_t i = 0; i < ga.size(); ++i)
        for (size_t j = i + 1; j < ga.size(); ++j)
            for (size_t k = j + 1; k < ga.size(); ++k) {
                std::vector<std::string> sa = {ga[i], ga[j], ga[k]};
                std::vector<std::string> sb = {(*iso)[ga[i]], (*iso)[ga[j]], (*iso)[ga[k]]};
                CHECK(fano.matroid.rank_of_subset(sa) == other.rank_of_subset(sb));
            }

    // same rank and size, different girth: no map can exist
    auto l6 = build_figure(Family::Lr, 6);
    auto j6 = build_figure(Family::Jr, 6);
    CHECK(!iso_check(l6.matroid, j6.matroid).has_value());

    // anchored search respects the pin
    auto anchored = iso_check(fano.matroid, other, std::make_pair(ga[0], (*iso)[ga[0]]));
    CHECK(anchored.has_value());
}

TEST_CASE("embedding search locates restrictions inside larger hosts") {
    auto m6 = build_figure(Family::Mr, 6);
    LinearMatroid small = m6.matroid.deleted({"g2", "g4"});
    auto emb = embeds_into(small, m6.matroid, std::make_pair(std::string("e"), std::string("e")));
    REQUIRE(emb.has_value());
    CHECK((*emb)["e"] == "e");
    // rank profile preserved on the image of every small subset (spot checks)
    std::mt19937 g(8108);
    const auto ground = small.ground_set();
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::string> sa, sb;
        for (const auto& l : ground)
            if (g() % 2) {
                sa.push_back(l);
                sb.push_back((*emb)[l]);
            }
        CHECK(small.rank_of_subset(sa) == m6.matroid.rank_of_subset(sb));
    }
    // a circuit cannot embed into a free host of the same rank
    auto host = build_uniform(3, 3, 2);
    auto c = build_circuit_uniform(3, 2);
    CHECK(!embeds_into(c.matroid, host.matroid).has_value());
}

TEST_CASE("guards on expensive searches fire") {
    auto big = build_figure(Family::Mr, 13);  // 26 elements, past the circuit-listing guard
    CHECK_THROWS_AS(big.matroid.circuits(), ResourceError);
    auto l12 = build_figure(Family::Lr, 12);  // 16 elements, past the unanchored-iso guard
    CHECK_THROWS_AS(iso_check(l12.matroid, l12.matroid), ResourceError);
}
