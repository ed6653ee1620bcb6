#include <doctest.h>

#include <cmath>

#include "conleyifs/conley.hpp"
#include "support.hpp"

using namespace conleyifs;
using testsupport::as_set;
using testsupport::cells_with_center_in;
using testsupport::edge_lists;
using testsupport::kosaraju;
using testsupport::omega_oracle;
using testsupport::set_of;

namespace {

TransitionRelation halving(GridPtr g) {
    return TransitionRelation::build(g, {g->space(), {MapSpec::affine1d(0.5, 0)}, "halving"},
                                     {});
}

TransitionRelation rotation(GridPtr g) {
    return TransitionRelation::build(
        g, {g->space(), {MapSpec::moebius({0, 1}, 0, 0, 1)}, "rotation"}, {});
}

TransitionRelation staircase(GridPtr g) {
    return TransitionRelation::build(g, {g->space(), {MapSpec::piecewise_parabola()}, "pwq"},
                                     {});
}

}  // namespace

TEST_CASE("is_block examples") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CHECK(is_block(rel, set_of(g, {0, 1, 2, 3})).ok);
    CHECK(is_block(rel, CellSet::full_set(g)).ok);  // surjective-enough: image ⊆ X = interior

    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    BlockCheck chk = is_block(rot, set_of(circ, {0, 1}));
    CHECK_FALSE(chk.ok);
    CHECK(chk.violations.any());  // margin report names the escaping cells
    CHECK(is_block(rot, CellSet::full_set(circ)).ok);
}

TEST_CASE("attractor_from_block examples") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CellSet q = cells_with_center_in(g, 0.0, 0.499);
    REQUIRE(is_block(rel, q).ok);
    CellSet a = attractor_from_block(rel, q);
    CHECK(a == set_of(g, {0}));
    CHECK(rel.image(a) == a);  // fixed-set law

    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    CHECK(attractor_from_block(rot, CellSet::full_set(circ)) == CellSet::full_set(circ));
    CHECK_THROWS_AS(attractor_from_block(rot, set_of(circ, {0, 1})), ContractError);
}

TEST_CASE("staircase attractor [-1,1] from a block") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    CellSet q = cells_with_center_in(g, -1.2, 1.2);
    REQUIRE(is_block(rel, q).ok);
    CellSet a = attractor_from_block(rel, q);
    CellSet target = cells_with_center_in(g, -1, 1);
    CHECK(hausdorff(a, target) <= 2 * 2 * g->scale() + 1e-12);  // within 2 cells
    CHECK(rel.image(a) == a);
}

TEST_CASE("omega limits") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CHECK(omega_limit(rel, set_of(g, {6})) == set_of(g, {0}));

    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    CellSet om = omega_limit(rot, set_of(circ, {0}));
    CHECK(om == set_of(circ, {0, 2, 4, 6}));
    CHECK(rot.image(om) == om);
    // graph oracle agrees
    CHECK(as_set(om) == omega_oracle(edge_lists(rot), {0}));

    auto line = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation pw = staircase(line);
    int c07 = line->point_to_cell(make_point1(0.7));
    int c0 = line->point_to_cell(make_point1(0.0));
    CellSet om2 = omega_limit(pw, set_of(line, {c07}));
    CHECK(om2.contains(c0));
    CHECK(om2.subset_of(neighbor_closure(set_of(line, {c0}), 1)));
}

TEST_CASE("find_block succeeds near the contracting fixed point") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CellSet a = set_of(g, {0});
    REQUIRE(rel.image(a) == a);
    FindBlockResult fb = find_block(rel, a, cells_with_center_in(g, 0.0, 0.4));
    REQUIRE(fb.ok);
    CHECK(is_block(rel, fb.block).ok);
    CHECK(a.subset_of(fb.block));
    CHECK(attractor_from_block(rel, fb.block) == a);
}

TEST_CASE("find_block trivial and failing cases on the rotation") {
    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    CellSet full = CellSet::full_set(circ);
    FindBlockResult fb = find_block(rot, full, full);
    REQUIRE(fb.ok);
    CHECK(fb.block == full);

    CellSet evens = set_of(circ, {0, 2, 4, 6});
    REQUIRE(rot.image(evens) == evens);
    FindBlockResult fail = find_block(rot, evens, neighbor_closure(evens, 1));
    CHECK_FALSE(fail.ok);
    CHECK_FALSE(fail.diagnostic.empty());

    // exhaustive oracle: no proper nonempty subset is a block at all
    for (uint32_t mask = 1; mask < 255; ++mask) {
        CellSet q = CellSet::empty_set(circ);
        for (int i = 0; i < 8; ++i)
            if (mask & (1u << i)) q.insert(i);
        CHECK_FALSE(is_block(rot, q).ok);
    }
    CHECK(block_impossibility_certificate(rot).has_value());
}

TEST_CASE("find_block contract checks") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CellSet not_invariant = set_of(g, {5});
    CHECK_THROWS_AS(find_block(rel, not_invariant, CellSet::full_set(g)), ContractError);
    CellSet a = set_of(g, {0});
    CHECK_THROWS_AS(find_block(rel, a, set_of(g, {5, 6})), ContractError);  // A ⊄ N
}

TEST_CASE("basin examples") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = halving(g);
    CHECK(basin(rel, set_of(g, {0})) == CellSet::full_set(g));

    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    CellSet evens = set_of(circ, {0, 2, 4, 6});
    CHECK(basin(rot, evens) == evens);  // odd cycle is recurrent and outside

    auto line = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation pw = staircase(line);
    CellSet a = omega_limit(pw, cells_with_center_in(line, 0, 1));
    CellSet b = basin(pw, a);
    CellSet expected = cells_with_center_in(line, -1, 2);
    // open-interval basin (-1, 2) up to two cells at each edge
    CHECK(b.subset_of(neighbor_closure(expected, 2)));
    CHECK((expected - neighbor_closure(b, 2)).none());
    // forward invariance of the basin
    CHECK(pw.image(b).subset_of(b));
}

TEST_CASE("basin recurrence matches the scc oracle") {
    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    auto adj = edge_lists(rot);
    auto oracle = kosaraju(adj);
    CellSet evens = set_of(circ, {0, 2, 4, 6});
    CellSet b = basin(rot, evens);
    for (int c = 0; c < 8; ++c) {
        bool in_b = b.contains(c);
        // reachable recurrent components: follow the permutation
        bool good = evens.contains(c);
        CHECK(in_b == good);
    }
    CHECK(oracle.n_comps == 2);
}

TEST_CASE("dual repeller on the staircase map") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    CellSet a = omega_limit(rel, cells_with_center_in(g, 0, 1));
    FindBlockResult fb = find_block(rel, a, dilate(cells_with_center_in(g, 0, 1), 0.45));
    REQUIRE(fb.ok);
    CellSet dual = dual_repeller(rel, fb.block);
    // reverse-orbit oracle: iterate the branchwise inverse from samples and
    // collect accumulation cells
    Space sp = g->space();
    MapSpec inv = MapSpec::piecewise_parabola_inverse();
    CellSet accum = CellSet::empty_set(g);
    for (double x0 : {-2.4, -2.2, -1.7, -1.3, 2.2, 2.6, 3.0, 2.05}) {
        if (x0 < sp.a || x0 > sp.b) continue;
        double x = x0;
        bool escaped = false;
        for (int k = 0; k < 200; ++k) {
            x = eval(sp, inv, make_point1(x)).v[0];
            if (x < sp.a || x > sp.b) {
                escaped = true;
                break;
            }
        }
        if (!escaped) accum.insert(g->point_to_cell(make_point1(x)));
    }
    // the reverse orbits accumulate on [-2.5,-2] and [2, 2.5]
    CellSet expected = cells_with_center_in(g, -2.5, -2) | cells_with_center_in(g, 2, 2.5);
    CHECK(accum.subset_of(neighbor_closure(dual, 2)));
    CHECK(hausdorff(dual, expected) <= 4 * g->scale() + 1e-12);
    // theorem-level disjointness, exact
    CHECK((dual & basin(rel, a)).none());
    CHECK((dual & a).none());
}

TEST_CASE("dual repeller requires invertibility") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    IFSSpec squash{g->space(), {MapSpec::affine1d(0, 0.5)}, "constant"};
    TransitionRelation rel = TransitionRelation::build(g, squash, {});
    CHECK_THROWS_AS(dual_repeller(rel, set_of(g, {3, 4, 5})), CapabilityError);
}

TEST_CASE("block duality under reversal") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {500});
    TransitionRelation rel = staircase(g);
    CellSet a = omega_limit(rel, cells_with_center_in(g, 0, 1));
    FindBlockResult fb = find_block(rel, a, dilate(cells_with_center_in(g, 0, 1), 0.45));
    REQUIRE(fb.ok);
    TransitionRelation rev = rel.reversed();
    CellSet comp = fb.block.complement();
    // complement is forward-invariant under the reversed relation, exactly
    CHECK(rev.image(comp).subset_of(comp));
    // with one-cell erosion the complement is a block for the reversed relation
    CellSet eroded = interior(comp);
    CHECK(is_block(rev, eroded).ok);
}

TEST_CASE("strictness verdicts") {
    // just-touching pair {x/2, x/2 + 1/2}: the full interval is a strict attractor
    auto g = Grid::make(Space::interval(0, 1), {64});
    IFSSpec pair{g->space(),
                 {MapSpec::affine1d(0.5, 0), MapSpec::affine1d(0.5, 0.5)},
                 "two-halves"};
    TransitionRelation rel = TransitionRelation::build(g, pair, {});
    CellSet full = CellSet::full_set(g);
    REQUIRE(rel.image(full) == full);
    StrictReport sr = is_strict(rel, full, full, 1000);
    CHECK(sr.verdict == StrictVerdict::Strict);
    CHECK(sr.exhaustive);

    // rotation: omega of any arc is the 4-cycle, a proper subset of the circle
    auto circ = Grid::make(Space::circle(), {8});
    TransitionRelation rot = rotation(circ);
    CellSet whole = CellSet::full_set(circ);
    StrictReport rs = is_strict(rot, whole, whole, 16);
    CHECK(rs.verdict == StrictVerdict::NotStrict);
    CHECK(rs.witness_cell >= 0);
    CHECK(rs.omega_missing_part);

    // budget smaller than the region: inconclusive without a violation
    auto gi = Grid::make(Space::interval(0, 1), {64});
    TransitionRelation h = halving(gi);
    CellSet a = set_of(gi, {0});
    StrictReport inc = is_strict(h, a, basin(h, a), 3);
    CHECK(inc.verdict != StrictVerdict::Strict);
}

TEST_CASE("block lattice laws on random pairs") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {200});
    TransitionRelation rel = staircase(g);
    Rng rng(97);
    std::vector<CellSet> blocks;
    while (blocks.size() < 12) {
        double lo = -2.4 + rng.real() * 3.0;
        double hi = lo + 0.3 + rng.real() * 1.5;
        CellSet n = cells_with_center_in(g, lo, std::min(2.4, hi));
        if (n.none()) continue;
        CellSet a = omega_limit(rel, n);
        if (!a.subset_of(n)) continue;
        FindBlockResult fb = find_block(rel, a, n);
        if (fb.ok) blocks.push_back(fb.block);
    }
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j) {
            CellSet u = blocks[i] | blocks[j];
            CellSet x = blocks[i] & blocks[j];
            CHECK(is_block(rel, u).ok);
            CHECK(is_block(rel, x).ok);
            CellSet au = attractor_from_block(rel, u);
            CHECK(au == (attractor_from_block(rel, blocks[i]) |
                         attractor_from_block(rel, blocks[j])));
            if (x.any()) {
                CellSet ax = attractor_from_block(rel, x);
                CHECK(ax.subset_of(attractor_from_block(rel, blocks[i]) &
                                   attractor_from_block(rel, blocks[j])));
            }
            // block/omega agreement on certified blocks
            CHECK(attractor_from_block(rel, u) == omega_limit(rel, u));
        }
}

TEST_CASE("nested compact sets share the omega limit") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {1000});
    TransitionRelation rel = staircase(g);
    CellSet a = omega_limit(rel, cells_with_center_in(g, 0, 1));
    for (double pad : {0.05, 0.25, 0.45}) {
        CellSet s = a | cells_with_center_in(g, -pad, 1 + pad);
        CHECK(omega_limit(rel, s) == a);
    }
}
