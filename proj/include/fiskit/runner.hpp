#pragma once

#include <json.hpp>

#include "fiskit/scenario.hpp"

namespace fiskit {

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    int resolution_override = 0;
    std::string dump_matrices_dir; // empty: no export
    bool timings = false;
};

struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = 0; // 0 pass, 1 assertion failure, 2 input error
};

/// Execute the scenario's tasks in order and build the report. Task-level
/// errors are serialized into the report with exit code 1; loading and
/// validation problems surface as exceptions (exit code 2 at the CLI).
RunResult run_scenario(const Scenario& s, const RunOptions& opts);

} // namespace fiskit
