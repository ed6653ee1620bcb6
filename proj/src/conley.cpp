#include "conleyifs/conley.hpp"

#include <algorithm>
#include <unordered_map>

#include "conleyifs/graph.hpp"

namespace conleyifs {

BlockCheck is_block(const TransitionRelation& rel, const CellSet& q) {
    BlockCheck out;
    CellSet img = rel.image(q);
    CellSet inner = interior(q);
    out.violations = img - inner;
    out.ok = out.violations.none();
    return out;
}

CellSet invariant_core(const TransitionRelation& rel, const CellSet& region) {
    CellSet s = region;
    while (true) {
        CellSet next = rel.image(s) & region;
        // intersecting with the previous set keeps the descent monotone even
        // when region is not forward-invariant
        next &= s;
        if (next == s) return s;
        s = std::move(next);
    }
}

CellSet attractor_from_block(const TransitionRelation& rel, const CellSet& q) {
    BlockCheck chk = is_block(rel, q);
    if (!chk.ok)
        throw ContractError("attractor_from_block: Q is not an attractor block (" +
                            std::to_string(chk.violations.count()) +
                            " image cells escape the interior, first " +
                            std::to_string(chk.violations.first()) + ")");
    CellSet s = q;
    while (true) {
        CellSet next = rel.image(s) & q;
        if (next == s) return s;
        s = std::move(next);
    }
}

CellSet omega_limit(const TransitionRelation& rel, const CellSet& s) {
    if (s.none()) throw DomainError("omega_limit requires a nonempty start set");
    std::vector<CellSet> history;
    std::unordered_map<uint64_t, std::vector<size_t>> seen;
    CellSet cur = s;
    const int cap = 20 * rel.grid()->cell_count() + 1000;
    for (int step = 0; step < cap; ++step) {
        uint64_t h = cur.content_hash();
        auto it = seen.find(h);
        if (it != seen.end()) {
            for (size_t idx : it->second) {
                if (history[idx] == cur) {
                    CellSet unioned = cur;
                    for (size_t j = idx; j < history.size(); ++j) unioned |= history[j];
                    return unioned;
                }
            }
        }
        seen[h].push_back(history.size());
        history.push_back(cur);
        cur = rel.image(cur);
    }
    throw ContractError("omega_limit did not reach a cycle within the iteration cap");
}

FindBlockResult find_block(const TransitionRelation& rel, const CellSet& a, const CellSet& n) {
    FindBlockResult res;
    if (a.none()) {
        res.diagnostic = "A is empty";
        return res;
    }
    if (!a.subset_of(n)) {
        throw ContractError("find_block: A must be contained in N");
    }
    if (rel.image(a) != a)
        throw ContractError("find_block: A is not invariant (image(A) != A)");

    // viability kernel: largest forward-invariant subset of N
    CellSet v = n;
    bool changed = true;
    while (changed) {
        changed = false;
        CellSet keep = v;
        v.for_each([&](int c) {
            for (uint32_t t : rel.targets(c))
                if (!v.contains(static_cast<int>(t))) {
                    keep.erase(c);
                    changed = true;
                    return;
                }
        });
        v = std::move(keep);
    }
    if (!a.subset_of(v)) {
        res.diagnostic = "no forward-invariant neighborhood of A inside N";
        return res;
    }

    // erode to the maximal block: drop cells whose image leaves interior(Q)
    CellSet q = v;
    changed = true;
    while (changed) {
        changed = false;
        CellSet inner = interior(q);
        CellSet keep = q;
        q.for_each([&](int c) {
            for (uint32_t t : rel.targets(c))
                if (!inner.contains(static_cast<int>(t))) {
                    keep.erase(c);
                    changed = true;
                    return;
                }
        });
        q = std::move(keep);
    }
    if (q.none() || !a.subset_of(q)) {
        res.diagnostic = "no attractor block inside N contains A at this resolution";
        return res;
    }
    CellSet attr = invariant_core(rel, q);
    res.block = q;
    res.attractor = attr;
    if (attr != a) {
        res.diagnostic =
            "maximal block in N certifies a different attractor (" +
            std::to_string(attr.count()) + " cells vs " + std::to_string(a.count()) + ")";
        return res;
    }
    res.ok = true;
    return res;
}

namespace {
SccResult union_scc(const TransitionRelation& rel) {
    int m = rel.grid()->cell_count();
    return strongly_connected_components(
        m, [&rel](int c) -> const std::vector<uint32_t>& { return rel.targets(c); });
}
}  // namespace

CellSet basin(const TransitionRelation& rel, const CellSet& a) {
    if (rel.image(a) != a) throw ContractError("basin: A is not invariant (image(A) != A)");
    SccResult scc = union_scc(rel);
    int ncomp = static_cast<int>(scc.members.size());
    std::vector<char> good(ncomp, 1);
    // components come out in reverse topological order: successors first
    for (int comp = 0; comp < ncomp; ++comp) {
        if (scc.recurrent[comp]) {
            for (int cell : scc.members[comp])
                if (!a.contains(cell)) {
                    good[comp] = 0;
                    break;
                }
        }
        if (good[comp])
            for (int succ : scc.succ[comp])
                if (!good[succ]) {
                    good[comp] = 0;
                    break;
                }
    }
    CellSet out = CellSet::empty_set(rel.grid());
    for (int comp = 0; comp < ncomp; ++comp)
        if (good[comp])
            for (int cell : scc.members[comp]) out.insert(cell);
    return out;
}

CellSet dual_repeller(const TransitionRelation& rel, const CellSet& q) {
    if (!rel.invertible())
        throw CapabilityError("dual_repeller requires an invertible IFS behind the relation");
    TransitionRelation rev = rel.reversed();
    return invariant_core(rev, q.complement());
}

std::string StrictReport::describe() const {
    switch (verdict) {
        case StrictVerdict::Strict:
            return "strict (" + std::to_string(cells_checked) + " cells checked, exhaustive)";
        case StrictVerdict::NotStrict:
            return std::string("not_strict (witness cell ") + std::to_string(witness_cell) +
                   (omega_escapes ? ", omega escapes A" : ", omega is a proper subset of A") +
                   ")";
        case StrictVerdict::Inconclusive:
            return "inconclusive (" + std::to_string(cells_checked) +
                   " cells checked without violation, coverage partial)";
    }
    return "?";
}

StrictReport is_strict(const TransitionRelation& rel, const CellSet& a, const CellSet& b,
                       int sample_budget) {
    if (rel.image(a) != a)
        throw ContractError("is_strict: A is not invariant (image(A) != A)");
    if (!a.subset_of(b)) throw ContractError("is_strict: A must be contained in B");
    if (sample_budget < 1) throw ContractError("is_strict: sample budget must be positive");

    StrictReport rep;
    rep.witness_omega = CellSet::empty_set(rel.grid());

    // off-attractor cells first, evenly strided; then cells of A
    std::vector<int> order;
    {
        auto outside = (b - a).indices();
        auto inside = a.indices();
        order.reserve(outside.size() + inside.size());
        for (auto* src : {&outside, &inside}) {
            size_t cnt = src->size();
            if (!cnt) continue;
            size_t stride = std::max<size_t>(1, cnt / std::max(1, sample_budget));
            for (size_t phase = 0; phase < stride; ++phase)
                for (size_t i = phase; i < cnt; i += stride) order.push_back((*src)[i]);
        }
    }

    int total = b.count();
    CellSet single = CellSet::empty_set(rel.grid());
    for (int c : order) {
        if (rep.cells_checked >= sample_budget) break;
        single.insert(c);
        CellSet om = omega_limit(rel, single);
        single.erase(c);
        ++rep.cells_checked;
        if (om != a) {
            rep.verdict = StrictVerdict::NotStrict;
            rep.witness_cell = c;
            rep.witness_omega = om;
            rep.omega_escapes = !om.subset_of(a);
            rep.omega_missing_part = !a.subset_of(om);
            return rep;
        }
    }
    rep.exhaustive = rep.cells_checked >= total;
    rep.verdict = rep.exhaustive ? StrictVerdict::Strict : StrictVerdict::Inconclusive;
    return rep;
}

std::optional<std::string> block_impossibility_certificate(const TransitionRelation& rel) {
    const Grid& g = *rel.grid();
    int m = g.cell_count();
    // bijective single-valued relation: images preserve cardinality
    std::vector<int> indeg(m, 0);
    for (int c = 0; c < m; ++c) {
        if (rel.targets(c).size() != 1) return std::nullopt;
        indeg[static_cast<int>(rel.targets(c)[0])]++;
    }
    for (int c = 0; c < m; ++c)
        if (indeg[c] != 1) return std::nullopt;
    // connected neighbor graph: every proper subset has a boundary cell,
    // so interior(Q) is strictly smaller than Q
    std::vector<char> seen(m, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        for (int nb : g.neighbors(c))
            if (!seen[nb]) {
                seen[nb] = 1;
                ++visited;
                stack.push_back(nb);
            }
    }
    if (visited != m) return std::nullopt;
    return "relation is a cell permutation and the neighbor graph is connected: any proper "
           "nonempty Q has |image(Q)| = |Q| > |interior(Q)|, so no proper attractor block "
           "exists";
}

}  // namespace conleyifs
