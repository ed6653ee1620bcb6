#include "conleyifs/graph.hpp"

#include <algorithm>

namespace conleyifs {

// Iterative Tarjan; recursion depth on path graphs can reach the cell count.
SccResult strongly_connected_components(
    int n, const std::function<const std::vector<uint32_t>&(int)>& adjacency) {
    SccResult res;
    res.comp_of.assign(n, -1);

    std::vector<int32_t> index(n, -1), lowlink(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int32_t> stack;
    stack.reserve(n);
    int next_index = 0;

    struct Frame {
        int v;
        size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& fr = call.back();
            int v = fr.v;
            if (fr.edge == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            const auto& adj = adjacency(v);
            bool descended = false;
            while (fr.edge < adj.size()) {
                int w = static_cast<int>(adj[fr.edge++]);
                if (index[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                int comp = static_cast<int>(res.members.size());
                res.members.emplace_back();
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    res.comp_of[w] = comp;
                    res.members[comp].push_back(w);
                } while (w != v);
                std::sort(res.members[comp].begin(), res.members[comp].end());
            }
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().v;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }

    int ncomp = static_cast<int>(res.members.size());
    res.recurrent.assign(ncomp, 0);
    res.succ.assign(ncomp, {});
    for (int v = 0; v < n; ++v) {
        int cv = res.comp_of[v];
        for (uint32_t wu : adjacency(v)) {
            int cw = res.comp_of[static_cast<int>(wu)];
            if (cw == cv) {
                res.recurrent[cv] = 1;  // size > 1 or an explicit self-loop
            } else {
                res.succ[cv].push_back(cw);
            }
        }
    }
    for (auto& s : res.succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    for (int c = 0; c < ncomp; ++c)
        if (res.members[c].size() > 1) res.recurrent[c] = 1;
    return res;
}

}  // namespace conleyifs
