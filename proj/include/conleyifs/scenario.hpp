#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conleyifs/dynamics.hpp"
#include "conleyifs/relation.hpp"

namespace conleyifs {

// Fully resolved run description. Loaded from a JSON scenario file; preset
// names expand to bundled definitions before validation.
struct Scenario {
    std::string label;
    std::string preset;  // empty for explicit scenarios
    Space space;
    std::vector<int> resolution;
    IFSSpec ifs;
    RelationBuildOptions relation;
    std::vector<std::string> tasks;  // subset of the known task names
    std::string out_dir = "out";
    uint64_t seed = 0;

    double chain_epsilon = -1;  // < 0: one cell width
    int coding_addresses = 32;
    int coding_points = 8;
    int coding_depth = 60;
    double coding_tol = 1e-6;
    long chaos_steps = 100000;
    long chaos_burn_in = 100;
    int image_width = 0;   // 0: per-space default
    int image_height = 0;
    int strict_budget = 64;
    int block_rings = 3;       // neighborhood rings around a candidate attractor
    int candidate_cap = 64;    // max attractor candidates examined per run

    std::vector<std::string> notes;     // preset annotations
    std::vector<std::string> warnings;  // load-time diagnostics
};

extern const std::vector<std::string> kTaskOrder;
bool known_task(const std::string& name);

struct PresetInfo {
    std::string name;
    std::string summary;
};
std::vector<PresetInfo> list_presets();

// Expand a bundled preset; params carries optional JSON overrides
// (m, n, resolution, tasks, seed, ...).
Scenario preset_scenario(const std::string& name, const std::string& params_json = "{}");

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text, const std::string& origin);

}  // namespace conleyifs
