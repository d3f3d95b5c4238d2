#pragma once

#include <optional>
#include <string>

#include "fqm/matroid.hpp"
#include "fqm/verify.hpp"

namespace fqm {

struct AnalyzeOptions {
    bool with_circuits = false;           ///< include the full circuit list (ground set <= 24)
    std::optional<std::string> element;   ///< deep per-element report (classification at q=2,
                                          ///< census at q=3)
};

/// Matroid analysis as JSON (schema_version 1, keys in sorted order): field
/// size, dimensions, rank, simplicity, coloops, girth (null when the matroid
/// is free), paving flags, the designated element when known, and a per-column
/// status row.  AnalyzeOptions add the circuit list and the element report.
std::string analyze_json(const LinearMatroid& m, const std::optional<std::string>& designated,
                         const AnalyzeOptions& opts = {});

/// The same content as a human-readable table.
std::string analyze_text(const LinearMatroid& m, const std::optional<std::string>& designated,
                         const AnalyzeOptions& opts = {});

/// SuiteOutcome JSON with the command echo injected.
std::string verify_json(const SuiteOutcome& outcome, bool include_elapsed = true);

}  // namespace fqm
