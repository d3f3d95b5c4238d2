#include <algorithm>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/verify.hpp"
#include "json.hpp"

using namespace fqm;

namespace {

SuiteConfig quick(const std::string& suite) {
    SuiteConfig c;
    c.suite = suite;
    c.samples = 60;
    c.seed = 99;
    return c;
}

}  // namespace

TEST_CASE("every campaign passes at reduced scale and counts real work") {
    auto has = [](const SuiteOutcome& o, const char* key) {
        auto it = o.counts.find(key);
        return it != o.counts.end() && it->second > 0;
    };

    SUBCASE("binary classification") {
        SuiteConfig c = quick("thm-binary");
        c.rank_max = 5;
        SuiteOutcome o = run_suite(c);
        CHECK(o.pass);
        CHECK(o.violations.empty());
        CHECK(has(o, "exhaustive_matroids"));
        CHECK(has(o, "loose_elements"));
        CHECK(has(o, "classified_Lr"));
        CHECK(has(o, "classified_Jr"));
        CHECK(has(o, "classified_MrRestriction"));
        CHECK(has(o, "classified_NrRestriction"));
        CHECK(has(o, "family_forward_checks"));
        CHECK(has(o, "sampled_matroids"));
    }
    SUBCASE("ternary ground-set bound") {
        SuiteOutcome o = run_suite(quick("thm-ternary-bound"));
        CHECK(o.pass);
        CHECK(has(o, "census_runs"));
        CHECK(has(o, "free_checked"));
        CHECK(has(o, "instances_sampled"));
    }
    SUBCASE("two loose elements force low rank") {
        SuiteOutcome o = run_suite(quick("thm-two-loose"));
        CHECK(o.pass);
        CHECK(has(o, "pairs_audited"));
        CHECK(has(o, "cocircuit_pairs"));
        CHECK(has(o, "rank_ok"));
        CHECK(has(o, "one_side_hits"));
    }
    SUBCASE("paving caps") {
        SuiteOutcome o = run_suite(quick("thm-paving"));
        CHECK(o.pass);
        CHECK(has(o, "paving_checked"));
        CHECK(has(o, "ag32_hits"));
        CHECK(has(o, "golay_checked"));
        CHECK(has(o, "sampled_paving"));
    }
    SUBCASE("free-element structure") {
        SuiteOutcome o = run_suite(quick("prop-free"));
        CHECK(o.pass);
        CHECK(has(o, "free_elements"));
        CHECK(has(o, "circuits_confirmed"));
        CHECK(has(o, "trees_built"));
        CHECK(has(o, "sampled_free"));
    }
}

TEST_CASE("tallies are byte-identical across worker counts and reruns") {
    for (const char* suite : {"thm-two-loose", "prop-free"}) {
        CAPTURE(suite);
        SuiteConfig c = quick(suite);
        c.workers = 1;
        std::string first = run_suite(c).to_json(false);
        c.workers = 3;
        CHECK(run_suite(c).to_json(false) == first);
        c.workers = 1;
        CHECK(run_suite(c).to_json(false) == first);  // rerun, same seed
    }
}

TEST_CASE("the seed changes the sampled work") {
    SuiteConfig a = quick("prop-free");
    a.mode = "sample";
    SuiteConfig b = a;
    b.seed = a.seed + 1;
    CHECK(run_suite(a).to_json(false) != run_suite(b).to_json(false));
}

TEST_CASE("negative controls fire for every campaign") {
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        CHECK(negative_control_fires(name));
    }
    CHECK_THROWS_AS(negative_control_fires("nope"), PreconditionError);
}

TEST_CASE("configuration guards reject out-of-contract requests") {
    SuiteConfig c;
    c.suite = "nope";
    CHECK_THROWS_AS(run_suite(c), PreconditionError);

    c = quick("thm-binary");
    c.mode = "everything";
    CHECK_THROWS_AS(run_suite(c), PreconditionError);

    c = quick("thm-binary");
    c.q = 3;
    CHECK_THROWS_AS(run_suite(c), PreconditionError);

    c = quick("thm-ternary-bound");
    c.rank_min = c.rank_max = 4;
    CHECK_THROWS_AS(run_suite(c), PreconditionError);

    c = quick("thm-two-loose");
    c.q = 7;
    CHECK_THROWS_AS(run_suite(c), PreconditionError);

    c = quick("thm-paving");
    c.rank_min = -1;
    CHECK_THROWS_AS(run_suite(c), PreconditionError);
}

TEST_CASE("outcome serialization carries the resolved configuration") {
    SuiteConfig c = quick("thm-two-loose");
    c.q = 2;
    SuiteOutcome o = run_suite(c);
    auto j = nlohmann::json::parse(o.to_json(true));
    CHECK(j["schema_version"] == 1);
    CHECK(j["suite"] == "thm-two-loose");
    CHECK(j["config"]["q"] == 2);
    CHECK(j["config"]["samples"] == 60);
    CHECK(j["config"]["seed"] == 99);
    CHECK(j["config"]["mode"] == "all");
    CHECK(j["counts"].is_object());
    CHECK(j["violations"].is_array());
    CHECK(j["pass"].is_boolean());
    CHECK(j.contains("elapsed_ms"));
    auto without = nlohmann::json::parse(o.to_json(false));
    CHECK(!without.contains("elapsed_ms"));
}

TEST_CASE("exhaustive and sampled phases can run alone") {
    SuiteConfig c = quick("prop-free");
    c.mode = "exhaustive";
    SuiteOutcome ex = run_suite(c);
    CHECK(ex.pass);
    CHECK(ex.counts.count("sampled_free") == 0);
    c.mode = "sample";
    SuiteOutcome sa = run_suite(c);
    CHECK(sa.pass);
    CHECK(sa.counts.count("trees_built") == 0);
    CHECK(sa.counts.at("sampled_free") > 0);
}
