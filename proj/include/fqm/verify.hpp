#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fqm {

/// One randomized/exhaustive verification campaign.  Zero or empty fields
/// take suite-specific defaults; the resolved values are echoed back in the
/// outcome.  `workers` only controls scheduling: results are byte-identical
/// for any worker count because every chunk owns a private generator seeded
/// from (seed, chunk index) and chunks merge in index order.
struct SuiteConfig {
    std::string suite;
    int q = 0;
    int rank_min = 0;
    int rank_max = 0;
    std::string mode;  ///< "exhaustive", "sample", or "all"
    long samples = 0;
    std::uint64_t seed = 1;
    int chunk_size = 0;
    int workers = 0;  ///< 0: FQMATROID_WORKERS env, else hardware clamped to [1,8]
};

struct SuiteOutcome {
    SuiteConfig config;  ///< resolved values (workers are not serialized)
    std::map<std::string, long> counts;
    std::vector<std::string> violations;
    bool pass = false;
    long elapsed_ms = 0;

    /// Stable serialization: sorted keys, fixed schema.  Timing is the only
    /// nondeterministic field and is dropped when include_elapsed is false.
    std::string to_json(bool include_elapsed = true) const;
};

/// The five campaign names accepted by run_suite.
std::vector<std::string> suite_names();

/// Runs one campaign.  Violations collect every instance that broke a
/// claimed bound or classification (with enough detail to rebuild it);
/// pass additionally requires the non-vacuity counters for the chosen mode.
/// Unknown suites, wrong fields, or bad modes throw PreconditionError.
SuiteOutcome run_suite(const SuiteConfig& config);

/// Feeds each guarded entry point of the suite's subject a qualifying bad
/// input and reports whether every guard fired.  Keeps the error paths
/// honest: a suite that cannot reject planted defects proves nothing.
bool negative_control_fires(const std::string& suite);

}  // namespace fqm
