#include "conleyifs/chain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace conleyifs {

ChainGraph ChainGraph::build(const TransitionRelation& rel, double epsilon, int threads) {
    if (epsilon < 0) throw ConfigError("chain graph requires epsilon >= 0");
    ChainGraph cg;
    cg.grid_ = rel.grid();
    cg.eps_ = epsilon;
    cg.invertible_ = rel.invertible();
    const Grid& g = *cg.grid_;
    int m = g.cell_count();
    cg.edges_.assign(m, {});
    if (epsilon == 0) {
        for (int c = 0; c < m; ++c) cg.edges_[c] = rel.targets(c);
    } else {
        // candidate targets near each cell center, one brute pass
        std::vector<std::vector<uint32_t>> near(m);
        parallel_for(m, threads, [&](int lo, int hi) {
            for (int s = lo; s < hi; ++s)
                for (int t = 0; t < m; ++t)
                    if (distance(g.space(), g.cell_center(s), g.cell_center(t)) <
                        epsilon + g.cell_radius(t))
                        near[s].push_back(static_cast<uint32_t>(t));
        });
        parallel_for(m, threads, [&](int lo, int hi) {
            for (int c = lo; c < hi; ++c) {
                std::vector<uint32_t> acc;
                for (uint32_t t : rel.targets(c))
                    acc.insert(acc.end(), near[t].begin(), near[t].end());
                std::sort(acc.begin(), acc.end());
                acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
                cg.edges_[c] = std::move(acc);
            }
        });
    }
    cg.finish();
    return cg;
}

void ChainGraph::finish() {
    int m = grid_->cell_count();
    scc_ = strongly_connected_components(
        m, [this](int c) -> const std::vector<uint32_t>& { return edges_[c]; });
}

size_t ChainGraph::edge_count() const {
    size_t n = 0;
    for (const auto& e : edges_) n += e.size();
    return n;
}

std::vector<int> ChainGraph::recurrent_components() const {
    std::vector<int> out;
    for (int c = 0; c < component_count(); ++c)
        if (scc_.recurrent[c]) out.push_back(c);
    return out;
}

CellSet ChainGraph::image(const CellSet& s) const {
    CellSet out = CellSet::empty_set(grid_);
    s.for_each([&](int c) {
        for (uint32_t t : edges_[c]) out.insert(static_cast<int>(t));
    });
    return out;
}

CellSet ChainGraph::chain_recurrent() const {
    CellSet out = CellSet::empty_set(grid_);
    for (int comp = 0; comp < component_count(); ++comp)
        if (scc_.recurrent[comp])
            for (int cell : scc_.members[comp]) out.insert(cell);
    return out;
}

std::vector<CellSet> ChainGraph::basic_attractors() const {
    std::vector<CellSet> out;
    std::unordered_map<uint64_t, std::vector<size_t>> seen;
    for (int comp : recurrent_components()) {
        // forward closure of the component
        CellSet reach = CellSet::empty_set(grid_);
        std::vector<int> stack;
        for (int cell : scc_.members[comp]) {
            reach.insert(cell);
            stack.push_back(cell);
        }
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            for (uint32_t t : edges_[c])
                if (!reach.contains(static_cast<int>(t))) {
                    reach.insert(static_cast<int>(t));
                    stack.push_back(static_cast<int>(t));
                }
        }
        // stabilized descent inside the forward-closed set
        CellSet s = reach;
        while (true) {
            CellSet next = image(s);
            if (next == s) break;
            s = std::move(next);
        }
        uint64_t h = s.content_hash();
        bool dup = false;
        for (size_t idx : seen[h])
            if (out[idx] == s) {
                dup = true;
                break;
            }
        if (!dup) {
            seen[h].push_back(out.size());
            out.push_back(std::move(s));
        }
    }
    return out;
}

CellSet ChainGraph::basin_of(const CellSet& a) const {
    int ncomp = component_count();
    std::vector<char> good(ncomp, 1);
    for (int comp = 0; comp < ncomp; ++comp) {
        if (scc_.recurrent[comp]) {
            for (int cell : scc_.members[comp])
                if (!a.contains(cell)) {
                    good[comp] = 0;
                    break;
                }
        }
        if (good[comp])
            for (int succ : scc_.succ[comp])
                if (!good[succ]) {
                    good[comp] = 0;
                    break;
                }
    }
    CellSet out = CellSet::empty_set(grid_);
    for (int comp = 0; comp < ncomp; ++comp)
        if (good[comp])
            for (int cell : scc_.members[comp]) out.insert(cell);
    return out;
}

ChainGraph ChainGraph::reversed() const {
    ChainGraph rev;
    rev.grid_ = grid_;
    rev.eps_ = eps_;
    rev.invertible_ = invertible_;
    int m = grid_->cell_count();
    rev.edges_.assign(m, {});
    for (int c = 0; c < m; ++c)
        for (uint32_t t : edges_[c]) rev.edges_[t].push_back(static_cast<uint32_t>(c));
    rev.finish();
    return rev;
}

CmwReport cmw_verify(const ChainGraph& cg, const TransitionRelation& rel) {
    if (!cg.invertible() || !rel.invertible())
        throw CapabilityError("cmw_verify requires an invertible IFS");

    CmwReport rep;
    rep.epsilon = cg.epsilon();
    std::vector<CellSet> basics = cg.basic_attractors();
    rep.basic_count = static_cast<int>(basics.size());

    // attractor family generated by the basics under union
    std::vector<CellSet> family;
    std::unordered_map<uint64_t, std::vector<size_t>> seen;
    auto add = [&](CellSet s) {
        if (s.none()) return;
        uint64_t h = s.content_hash();
        for (size_t idx : seen[h])
            if (family[idx] == s) return;
        seen[h].push_back(family.size());
        family.push_back(std::move(s));
    };
    if (rep.basic_count <= 16) {
        for (uint32_t mask = 1; mask < (1u << rep.basic_count); ++mask) {
            CellSet u = CellSet::empty_set(cg.grid());
            for (int i = 0; i < rep.basic_count; ++i)
                if (mask & (1u << i)) u |= basics[i];
            add(std::move(u));
        }
    } else {
        rep.pairs_only = true;
        for (size_t i = 0; i < basics.size(); ++i) {
            add(basics[i]);
            for (size_t j = i + 1; j < basics.size(); ++j) add(basics[i] | basics[j]);
        }
    }
    rep.family_size = family.size() + 2;  // plus the trivial attractors ∅ and X

    CellSet full = CellSet::full_set(cg.grid());
    CellSet inter = full;  // ∅ and X contribute A ∪ A* = X
    for (const CellSet& a : family) {
        CellSet dual = cg.basin_of(a).complement();
        inter &= (a | dual);
        rep.attractors.push_back(a);
        rep.duals.push_back(std::move(dual));
    }
    rep.intersection = inter;
    rep.recurrent = cg.chain_recurrent();
    rep.sym_diff = (inter - rep.recurrent) | (rep.recurrent - inter);
    rep.pass = rep.sym_diff.none();

    rep.summary = "cmw: " + std::to_string(rep.basic_count) + " basic attractors, family " +
                  std::to_string(rep.family_size) + " (incl. empty and full), |I|=" +
                  std::to_string(rep.intersection.count()) + " |R|=" +
                  std::to_string(rep.recurrent.count()) + " |I delta R|=" +
                  std::to_string(rep.sym_diff.count()) +
                  (rep.pass ? (rep.pairs_only ? " pass (pairs only)" : " pass") : " FAIL");
    return rep;
}

}  // namespace conleyifs
