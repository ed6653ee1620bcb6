#pragma once

#include <string>
#include <vector>

#include "conleyifs/graph.hpp"
#include "conleyifs/relation.hpp"

namespace conleyifs {

// Directed cell graph with an edge c -> c' whenever c' lies in the
// epsilon-dilation of image({c}); realizes epsilon-chains at cell
// resolution. epsilon = 0 keeps exactly the base relation's edges.
class ChainGraph {
public:
    static ChainGraph build(const TransitionRelation& rel, double epsilon, int threads = 1);

    const GridPtr& grid() const { return grid_; }
    double epsilon() const { return eps_; }
    bool invertible() const { return invertible_; }
    const std::vector<uint32_t>& edges(int c) const { return edges_[c]; }
    size_t edge_count() const;

    const SccResult& scc() const { return scc_; }
    int component_count() const { return static_cast<int>(scc_.members.size()); }
    std::vector<int> recurrent_components() const;

    CellSet image(const CellSet& s) const;
    CellSet chain_recurrent() const;

    // For each recurrent component M: the stabilized descent of the
    // forward-reachable set of M; deduplicated, each invariant under the
    // dilated relation.
    std::vector<CellSet> basic_attractors() const;

    // Cells whose reachable recurrent components all lie inside a.
    CellSet basin_of(const CellSet& a) const;

    ChainGraph reversed() const;

private:
    ChainGraph() = default;
    void finish();

    GridPtr grid_;
    double eps_ = 0;
    bool invertible_ = false;
    std::vector<std::vector<uint32_t>> edges_;
    SccResult scc_;
};

struct CmwReport {
    std::vector<CellSet> attractors;  // distinct union-closure members (nontrivial)
    std::vector<CellSet> duals;       // complement-of-basin duals, aligned
    CellSet intersection;             // I = ∩ (A ∪ A*)
    CellSet recurrent;                // R
    CellSet sym_diff;                 // I Δ R
    bool pass = false;
    bool pairs_only = false;          // basics exceeded the enumeration cap
    int basic_count = 0;
    size_t family_size = 0;           // reported size of U' including ∅ and X
    double epsilon = 0;
    std::string summary;
};

// Verifies the chain-recurrence identity R = ∩_{A} (A ∪ A*): enumerates the
// attractor family generated by basic attractors under union (all unions
// when there are at most 16 basics, otherwise singles and pairs only), takes
// each dual as the complement of its basin in the chain graph, and compares
// the intersection with the chain-recurrent set. Requires invertibility.
CmwReport cmw_verify(const ChainGraph& cg, const TransitionRelation& rel);

}  // namespace conleyifs
