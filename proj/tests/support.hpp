#pragma once

// Shared helpers and independent oracles for the test suites. Oracles here
// must stay independent of the implementation paths they check: the SCC
// oracle is Kosaraju (the library uses Tarjan), reachability and omega
// limits are recomputed from raw edge lists.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "conleyifs/geometry.hpp"
#include "conleyifs/relation.hpp"

namespace testsupport {

using conleyifs::CellSet;
using conleyifs::GridPtr;

inline CellSet cells_with_center_in(const GridPtr& g, double lo, double hi) {
    CellSet s = CellSet::empty_set(g);
    for (int c = 0; c < g->cell_count(); ++c) {
        double x = g->cell_center(c).v[0];
        if (x >= lo && x <= hi) s.insert(c);
    }
    return s;
}

inline CellSet set_of(const GridPtr& g, std::initializer_list<int> cells) {
    CellSet s = CellSet::empty_set(g);
    for (int c : cells) s.insert(c);
    return s;
}

// plain adjacency copy of a relation's union graph
inline std::vector<std::vector<int>> edge_lists(const conleyifs::TransitionRelation& rel) {
    std::vector<std::vector<int>> out(rel.grid()->cell_count());
    for (int c = 0; c < rel.grid()->cell_count(); ++c)
        for (uint32_t t : rel.targets(c)) out[c].push_back(static_cast<int>(t));
    return out;
}

// Kosaraju SCC oracle
struct SccOracle {
    std::vector<int> comp_of;
    int n_comps = 0;
    std::vector<bool> recurrent;
};

inline SccOracle kosaraju(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> radj(n);
    for (int v = 0; v < n; ++v)
        for (int w : adj[v]) radj[w].push_back(v);
    std::vector<int> order;
    std::vector<bool> seen(n, false);
    std::function<void(int)> dfs1 = [&](int v) {
        seen[v] = true;
        for (int w : adj[v])
            if (!seen[w]) dfs1(w);
        order.push_back(v);
    };
    for (int v = 0; v < n; ++v)
        if (!seen[v]) dfs1(v);
    SccOracle res;
    res.comp_of.assign(n, -1);
    std::function<void(int, int)> dfs2 = [&](int v, int c) {
        res.comp_of[v] = c;
        for (int w : radj[v])
            if (res.comp_of[w] == -1) dfs2(w, c);
    };
    for (int i = n - 1; i >= 0; --i)
        if (res.comp_of[order[i]] == -1) dfs2(order[i], res.n_comps++);
    res.recurrent.assign(res.n_comps, false);
    std::vector<int> size(res.n_comps, 0);
    for (int v = 0; v < n; ++v) ++size[res.comp_of[v]];
    for (int v = 0; v < n; ++v)
        for (int w : adj[v])
            if (res.comp_of[v] == res.comp_of[w] && (v != w || true) &&
                (size[res.comp_of[v]] > 1 || v == w))
                res.recurrent[res.comp_of[v]] = true;
    return res;
}

// omega limit by direct set iteration over raw edges (cycle detection on
// the full trajectory of subsets)
inline std::set<int> omega_oracle(const std::vector<std::vector<int>>& adj,
                                  const std::set<int>& start, int max_steps = 100000) {
    std::vector<std::set<int>> history;
    std::set<int> cur = start;
    for (int step = 0; step < max_steps; ++step) {
        auto it = std::find(history.begin(), history.end(), cur);
        if (it != history.end()) {
            std::set<int> acc;
            for (auto j = it; j != history.end(); ++j) acc.insert(j->begin(), j->end());
            return acc;
        }
        history.push_back(cur);
        std::set<int> next;
        for (int v : cur) next.insert(adj[v].begin(), adj[v].end());
        cur = std::move(next);
    }
    return cur;
}

inline std::set<int> as_set(const CellSet& s) {
    std::set<int> out;
    s.for_each([&](int i) { out.insert(i); });
    return out;
}

}  // namespace testsupport
