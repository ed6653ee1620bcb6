#include <doctest.h>

#include <cmath>

#include "conleyifs/chain.hpp"
#include "conleyifs/conley.hpp"
#include "support.hpp"

using namespace conleyifs;
using testsupport::as_set;
using testsupport::cells_with_center_in;
using testsupport::edge_lists;
using testsupport::kosaraju;
using testsupport::set_of;

namespace {

TransitionRelation rotation(GridPtr g) {
    return TransitionRelation::build(
        g, {g->space(), {MapSpec::moebius({0, 1}, 0, 0, 1)}, "rotation"}, {});
}

TransitionRelation staircase(GridPtr g) {
    return TransitionRelation::build(g, {g->space(), {MapSpec::piecewise_parabola()}, "pwq"},
                                     {});
}

TransitionRelation halving(GridPtr g) {
    return TransitionRelation::build(g, {g->space(), {MapSpec::affine1d(0.5, 0)}, "halving"},
                                     {});
}

}  // namespace

TEST_CASE("epsilon zero keeps the base edges") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    for (int c = 0; c < 8; ++c) CHECK(cg.edges(c) == rel.targets(c));
    CHECK_THROWS_AS(ChainGraph::build(rel, -0.1), ConfigError);
}

TEST_CASE("epsilon dilation only adds edges") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {200});
    TransitionRelation rel = staircase(g);
    ChainGraph base = ChainGraph::build(rel, 0.0);
    ChainGraph fat = ChainGraph::build(rel, 2 * g->scale());
    for (int c = 0; c < g->cell_count(); ++c)
        for (uint32_t t : base.edges(c)) {
            const auto& row = fat.edges(c);
            CHECK(std::binary_search(row.begin(), row.end(), t));
        }
    CHECK(fat.edge_count() >= base.edge_count());
}

TEST_CASE("rotation recurrence structure") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    // two 4-cycles: evens and odds
    auto rec = cg.recurrent_components();
    CHECK(rec.size() == 2);
    CHECK(cg.chain_recurrent() == CellSet::full_set(g));
    // oracle cross-check
    auto oracle = kosaraju(edge_lists(rel));
    CHECK(oracle.n_comps == 2);
}

TEST_CASE("chain recurrence of the halving map") {
    auto g = Grid::make(Space::interval(-1, 1), {64});
    TransitionRelation rel = halving(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    CellSet r = cg.chain_recurrent();
    CellSet zero = set_of(g, {g->point_to_cell(make_point1(0.0))});
    CHECK(r.subset_of(neighbor_closure(zero, 1)));
    CHECK(zero.subset_of(r));
}

TEST_CASE("staircase recurrent cells sit on the integers") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    ChainGraph cg = ChainGraph::build(rel, 2 * g->scale());
    CellSet r = cg.chain_recurrent();
    CellSet integers = CellSet::empty_set(g);
    for (int k = -2; k <= 2; ++k) integers.insert(g->point_to_cell(make_point1(double(k))));
    CHECK(integers.subset_of(r));
    CHECK(r.subset_of(neighbor_closure(integers, 1)));
    // SCC oracle agreement on the dilated graph
    std::vector<std::vector<int>> adj(g->cell_count());
    for (int c = 0; c < g->cell_count(); ++c)
        for (uint32_t t : cg.edges(c)) adj[c].push_back(static_cast<int>(t));
    auto oracle = kosaraju(adj);
    CellSet oracle_r = CellSet::empty_set(g);
    for (int c = 0; c < g->cell_count(); ++c)
        if (oracle.recurrent[oracle.comp_of[c]]) oracle_r.insert(c);
    CHECK(oracle_r == r);
}

TEST_CASE("monotonicity of chain recurrence in epsilon") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {300});
    TransitionRelation rel = staircase(g);
    CellSet prev = ChainGraph::build(rel, 0.0).chain_recurrent();
    for (double eps : {0.5 * g->scale(), 2.0 * g->scale(), 6.0 * g->scale()}) {
        CellSet cur = ChainGraph::build(rel, eps).chain_recurrent();
        CHECK(prev.subset_of(cur));
        prev = cur;
    }
}

TEST_CASE("reversal symmetry of chain recurrence") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {300});
    TransitionRelation rel = staircase(g);
    ChainGraph cg = ChainGraph::build(rel, 2 * g->scale());
    CHECK(cg.chain_recurrent() == cg.reversed().chain_recurrent());
}

TEST_CASE("basic attractors of the halving map") {
    auto g = Grid::make(Space::interval(-1, 1), {64});
    TransitionRelation rel = halving(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    auto basics = cg.basic_attractors();
    REQUIRE(basics.size() == 1);
    CellSet zero = set_of(g, {g->point_to_cell(make_point1(0.0))});
    CHECK(basics[0].subset_of(neighbor_closure(zero, 1)));
    CHECK(cg.image(basics[0]) == basics[0]);
}

TEST_CASE("basic attractors generate the staircase interval family") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    auto basics = cg.basic_attractors();
    // every basic is invariant and forward-closed in the condensation
    for (const auto& b : basics) {
        CHECK(cg.image(b) == b);
        CHECK(cg.image(b).subset_of(b));
    }
    // the union of all basics spans [-2, 2] cells
    CellSet all = CellSet::empty_set(g);
    for (const auto& b : basics) all |= b;
    CellSet expected = cells_with_center_in(g, -2, 2);
    CHECK(hausdorff(all, expected) <= 4 * g->scale() + 1e-12);
    // the interval [0,1] arises as a basic generated by the blob at 1
    bool found01 = false;
    CellSet target = cells_with_center_in(g, 0, 1);
    for (const auto& b : basics)
        if (b.any() && hausdorff(b, target) <= 4 * g->scale()) found01 = true;
    CHECK(found01);
}

TEST_CASE("rotation basic attractors are the two cycles") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    auto basics = cg.basic_attractors();
    REQUIRE(basics.size() == 2);
    CellSet evens = set_of(g, {0, 2, 4, 6});
    CellSet odds = set_of(g, {1, 3, 5, 7});
    CHECK(((basics[0] == evens && basics[1] == odds) ||
           (basics[0] == odds && basics[1] == evens)));
    // neither admits a block (flagged non-blocked by find_block failure)
    for (const auto& b : basics)
        CHECK_FALSE(find_block(rel, b, neighbor_closure(b, 1)).ok);
}

TEST_CASE("cmw identity on the halving map") {
    auto g = Grid::make(Space::interval(-1, 1), {64});
    TransitionRelation rel = halving(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    CmwReport rep = cmw_verify(cg, rel);
    CHECK(rep.pass);
    CHECK_FALSE(rep.pairs_only);
    CHECK(rep.intersection == rep.recurrent);
    // family report counts the trivial attractors too
    CHECK(rep.family_size == rep.attractors.size() + 2);
}

TEST_CASE("cmw identity on the staircase map") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    ChainGraph cg = ChainGraph::build(rel, 2 * g->scale());
    CmwReport rep = cmw_verify(cg, rel);
    CHECK(rep.pass);
    CHECK(rep.sym_diff.none());
    // one direction holds for every attractor-repeller pair
    for (size_t i = 0; i < rep.attractors.size(); ++i) {
        CellSet bound = neighbor_closure(rep.attractors[i] | rep.duals[i], 1);
        CHECK(rep.recurrent.subset_of(bound));
    }
}

TEST_CASE("cmw on the rotation sees only trivial attractors") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation(g);
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    CmwReport rep = cmw_verify(cg, rel);
    CHECK(rep.pass);
    CHECK(rep.recurrent == CellSet::full_set(g));
    CHECK(rep.intersection == CellSet::full_set(g));
}

TEST_CASE("cmw refuses non-invertible systems") {
    auto g = Grid::make(Space::interval(0, 1), {16});
    IFSSpec squash{g->space(), {MapSpec::affine1d(0, 0.5)}, "constant"};
    TransitionRelation rel = TransitionRelation::build(g, squash, {});
    ChainGraph cg = ChainGraph::build(rel, 0.0);
    CHECK_THROWS_AS(cmw_verify(cg, rel), CapabilityError);
}
