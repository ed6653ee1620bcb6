#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace conleyifs {

// Strongly connected components of a cell digraph given by an adjacency
// accessor. Components are numbered in reverse topological order of the
// condensation (every successor component has a smaller id).
struct SccResult {
    std::vector<int32_t> comp_of;                // cell -> component id
    std::vector<std::vector<int32_t>> members;   // component -> cells
    std::vector<char> recurrent;                 // has a cycle (size > 1 or self-loop)
    std::vector<std::vector<int32_t>> succ;      // condensation edges (deduped)
};

SccResult strongly_connected_components(
    int n, const std::function<const std::vector<uint32_t>&(int)>& adjacency);

}  // namespace conleyifs
