#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "conleyifs/conley.hpp"
#include "conleyifs/relation.hpp"
#include "support.hpp"

using namespace conleyifs;
using testsupport::cells_with_center_in;
using testsupport::set_of;

namespace {

TransitionRelation halving_relation(GridPtr g) {
    IFSSpec ifs{g->space(), {MapSpec::affine1d(0.5, 0)}, "halving"};
    return TransitionRelation::build(g, ifs, {});
}

TransitionRelation rotation_relation(GridPtr g) {
    IFSSpec ifs{g->space(), {MapSpec::moebius({0, 1}, 0, 0, 1)}, "rotation"};
    return TransitionRelation::build(g, ifs, {});
}

IFSSpec two_map_halving(const Space& sp) {
    return {sp, {MapSpec::affine1d(0.5, 0), MapSpec::affine1d(0.5, 0.5)}, "two-halves"};
}

}  // namespace

TEST_CASE("outer approximation contract: samples land in their targets") {
    for (auto mode : {BuildMode::Sampled, BuildMode::Padded}) {
        auto g = Grid::make(Space::interval(-2.5, 2.5), {40});
        IFSSpec ifs{g->space(), {MapSpec::piecewise_parabola()}, "staircase"};
        RelationBuildOptions opt;
        opt.mode = mode;
        TransitionRelation rel = TransitionRelation::build(g, ifs, opt);
        std::vector<Point> samples;
        for (int c = 0; c < g->cell_count(); ++c) {
            g->cell_samples(c, opt.samples_per_cell, samples);
            CHECK_FALSE(rel.targets(0, c).empty());  // total relation
            for (const Point& p : samples) {
                CHECK(g->point_to_cell(p) == c);  // samples lie in their own cell
                bool clip = false;
                int t = g->locate(eval(g->space(), ifs.maps[0], p), clip);
                const auto& row = rel.targets(0, c);
                CHECK(std::binary_search(row.begin(), row.end(), static_cast<uint32_t>(t)));
            }
        }
    }
}

TEST_CASE("halving map images by direct interval arithmetic") {
    auto g = Grid::make(Space::interval(0, 1), {4});
    TransitionRelation rel = halving_relation(g);
    // f([0.75,1]) = [0.375, 0.5]: the image interval sits in cell 1 with its
    // right endpoint on the cell-2 edge; padding may add neighbors
    CellSet img = rel.image_of_cell(3);
    CHECK(img.contains(1));
    CHECK(img.subset_of(set_of(g, {0, 1, 2})));
}

TEST_CASE("rotation is an exact arc permutation") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation_relation(g);
    for (int k = 0; k < 8; ++k) {
        const auto& row = rel.targets(0, k);
        REQUIRE(row.size() == 1);
        CHECK(row[0] == static_cast<uint32_t>((k + 2) % 8));
    }
    CHECK(rel.image(set_of(g, {0})) == set_of(g, {2}));
}

TEST_CASE("identity map keeps every cell in its own image") {
    auto g = Grid::make(Space::interval(0, 1), {16});
    IFSSpec ifs{g->space(), {MapSpec::affine1d(1.0, 0.0)}, "identity"};
    TransitionRelation rel = TransitionRelation::build(g, ifs, {});
    for (int c = 0; c < 16; ++c) CHECK(rel.image_of_cell(c).contains(c));
}

TEST_CASE("image and preimage_all on the two-map system") {
    auto g = Grid::make(Space::interval(0, 1), {8});
    TransitionRelation rel = TransitionRelation::build(g, two_map_halving(g->space()), {});
    CHECK(rel.image(CellSet::empty_set(g)).none());
    // the two images tile [0,1]
    CHECK(rel.image(CellSet::full_set(g)) == CellSet::full_set(g));
    CHECK(rel.preimage_all(CellSet::full_set(g)) == CellSet::full_set(g));
    // no cell maps into [0, 1/2] under BOTH maps
    CellSet low = cells_with_center_in(g, 0.0, 0.499);
    CHECK(rel.preimage_all(low).none());
}

TEST_CASE("rotation preimage_all inverts the permutation") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation_relation(g);
    CHECK(rel.preimage_all(set_of(g, {2})) == set_of(g, {0}));
}

TEST_CASE("monotonicity and galois inclusions") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {60});
    IFSSpec ifs{g->space(), {MapSpec::piecewise_parabola()}, "staircase"};
    TransitionRelation rel = TransitionRelation::build(g, ifs, {});
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        CellSet s = CellSet::empty_set(g), t = CellSet::empty_set(g);
        for (int i = 0; i < 10; ++i) {
            int c = static_cast<int>(rng.index(60));
            s.insert(c);
            t.insert(c);
        }
        for (int i = 0; i < 5; ++i) t.insert(static_cast<int>(rng.index(60)));
        CHECK(rel.image(s).subset_of(rel.image(t)));
        CHECK(rel.preimage_all(s).subset_of(rel.preimage_all(t)));
        CHECK(rel.image(rel.preimage_all(s)).subset_of(s));
        CHECK(s.subset_of(rel.preimage_all(rel.image(s))));
    }
}

TEST_CASE("union adjacency equals the union of per-map adjacencies") {
    auto g = Grid::make(Space::interval(0, 1), {16});
    TransitionRelation rel = TransitionRelation::build(g, two_map_halving(g->space()), {});
    for (int c = 0; c < 16; ++c) {
        CellSet u = CellSet::empty_set(g);
        for (int n = 0; n < 2; ++n)
            for (uint32_t t : rel.targets(n, c)) u.insert(static_cast<int>(t));
        CHECK(u == rel.image_of_cell(c));
    }
}

TEST_CASE("reverse is an involution") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation_relation(g);
    TransitionRelation rev = rel.reversed();
    for (int k = 0; k < 8; ++k) {
        const auto& row = rev.targets(0, k);
        REQUIRE(row.size() == 1);
        CHECK(row[0] == static_cast<uint32_t>((k + 6) % 8));
    }
    CHECK(rev.reversed() == rel);
}

TEST_CASE("reversed build agrees with built inverse at equal padding") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {500});
    IFSSpec fwd{g->space(), {MapSpec::piecewise_parabola()}, "staircase"};
    RelationBuildOptions opt;
    opt.padding = 2.0 * g->scale();  // equal explicit padding on both builds
    TransitionRelation a = TransitionRelation::build(g, fwd, opt).reversed();
    TransitionRelation b = TransitionRelation::build(g, fwd.inverse(), opt);
    size_t common = 0, total_a = a.edge_count(), total_b = b.edge_count();
    for (int c = 0; c < g->cell_count(); ++c) {
        const auto& ra = a.targets(0, c);
        const auto& rb = b.targets(0, c);
        for (uint32_t t : ra)
            if (std::binary_search(rb.begin(), rb.end(), t)) ++common;
    }
    double agreement = static_cast<double>(common) / std::max(total_a, total_b);
    CHECK(agreement >= 0.99);
}

TEST_CASE("binary cache round trip is edge identical") {
    auto g = Grid::make(Space::interval(-2.5, 2.5), {64});
    TransitionRelation rel = TransitionRelation::build(
        g, IFSSpec{g->space(), {MapSpec::piecewise_parabola()}, "staircase"}, {});
    std::string path = "/tmp/cifs_test_rel.cifsrel";
    rel.save(path);
    TransitionRelation loaded = TransitionRelation::load(path, g);
    CHECK(loaded == rel);
    auto g2 = Grid::make(Space::interval(-2.5, 2.5), {65});
    CHECK_THROWS_AS(TransitionRelation::load(path, g2), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("csv export lists src,map,dst") {
    auto g = Grid::make(Space::circle(), {8});
    TransitionRelation rel = rotation_relation(g);
    std::string path = "/tmp/cifs_test_rel.csv";
    rel.export_csv(path);
    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    CHECK(line == "src,map,dst");
    std::getline(f, line);
    CHECK(line == "0,1,2");
    std::remove(path.c_str());
}

TEST_CASE("refinement soundness on the staircase map") {
    // halving the cells produces an attractor inside the coarse attractor's
    // one-cell dilation (cross-module check, small scale)
    auto coarse = Grid::make(Space::interval(-2.5, 2.5), {64});
    auto fine = Grid::make(Space::interval(-2.5, 2.5), {128});
    IFSSpec ifs{coarse->space(), {MapSpec::piecewise_parabola()}, "staircase"};
    TransitionRelation rc = TransitionRelation::build(coarse, ifs, {});
    TransitionRelation rf = TransitionRelation::build(fine, ifs, {});
    CellSet target_c = cells_with_center_in(coarse, -1, 1);
    CellSet target_f = cells_with_center_in(fine, -1, 1);
    CellSet ac = conleyifs::omega_limit(rc, target_c);
    CellSet af = conleyifs::omega_limit(rf, target_f);
    CellSet coarse_ok = neighbor_closure(ac, 1);
    af.for_each([&](int cf) {
        int cc = coarse->point_to_cell(fine->cell_center(cf));
        CHECK(coarse_ok.contains(cc));
    });
}
