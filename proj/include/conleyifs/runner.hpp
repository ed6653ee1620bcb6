#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conleyifs/chain.hpp"
#include "conleyifs/conley.hpp"
#include "conleyifs/scenario.hpp"

namespace conleyifs {

struct TaskResult {
    std::string task;
    bool ok = false;
    std::string message;
    std::vector<std::string> outputs;  // file basenames under the output dir
};

struct RunReport {
    bool ok = false;
    std::string out_dir;
    std::vector<TaskResult> tasks;
    std::vector<std::string> warnings;
};

// Executes the scenario's tasks in dependency order and writes the relation
// cache, attractor records, chain/cmw/coding reports, chaos CSV, and images
// into the output directory. Outputs are byte-identical for equal seeds; on
// failure a FAILED marker file is left beside the partial outputs.
RunReport run(const Scenario& scenario, int threads = 1);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Preset-aware verification assertions (used by `conley-ifs verify`); for
// non-preset scenarios runs generic determinism and cache round-trip checks.
std::vector<CheckResult> verify_scenario(const Scenario& scenario, int threads = 1);

// Shared helpers for verification and tests.
CellSet cells_of_interval(const GridPtr& grid, double lo, double hi);
CellSet line_x0_cells(const GridPtr& grid);  // projective-plane cells meeting {x=0}

struct AttractorPipeline {
    TransitionRelation relation;
    std::vector<ConleyRecord> records;
    std::optional<std::string> impossibility;  // set when no proper block can exist
};
// The attractors task as a library call: relation build + candidate
// enumeration + block certification + basins + strictness.
AttractorPipeline run_attractors(const Scenario& scenario, int threads = 1);

}  // namespace conleyifs
