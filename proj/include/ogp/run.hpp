// run.hpp — dispatches parsed experiment configurations to the engines and
// emits CSV/JSON artifacts with provenance headers.

#pragma once

#include "ogp/config.hpp"

#include <filesystem>

namespace ogp {

// process exit codes; 1 is left to the CLI parser
enum ExitCode : int {
    exit_ok = 0,
    exit_undefined_phase = 2,  // a defined value was demanded at a nodal point
    exit_validation = 3,       // schema or physics validation failure
    exit_selftest_failure = 4, // numerical tolerance failure in selftest
    exit_io = 5,
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    int workers = 1;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    std::optional<int> grid_steps;      // overrides the config grid
    std::optional<double> nodal_tol;    // overrides the config tolerance
};

struct RunOutcome {
    int exit_code = exit_ok;
    std::vector<std::filesystem::path> artifacts;
    std::string message;
};

RunOutcome run(ExperimentConfig cfg, const RunOptions& opts);

}  // namespace ogp
