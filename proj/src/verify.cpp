#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "conleyifs/coding.hpp"
#include "conleyifs/runner.hpp"

namespace fs = std::filesystem;

namespace conleyifs {

namespace {

void check(std::vector<CheckResult>& out, const std::string& name, bool pass,
           const std::string& detail) {
    out.push_back({name, pass, detail});
}

double cell_width(const Grid& g) { return 2.0 * g.scale(); }

// the ex-multiple family: a certified block for every [-m', n']
void verify_ex_multiple(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    AttractorPipeline pipe = run_attractors(sc, threads);
    const TransitionRelation& rel = pipe.relation;
    GridPtr grid = rel.grid();
    double w = cell_width(*grid);

    int m = static_cast<int>(std::round(-grid->space().a - 0.6));
    int n = static_cast<int>(std::round(grid->space().b - 0.6));

    for (int mp = 0; mp <= m; ++mp)
        for (int np = 0; np <= n; ++np) {
            std::string name = "block for [-" + std::to_string(mp) + "," + std::to_string(np) + "]";
            CellSet target = cells_of_interval(grid, -mp, np);
            CellSet a = omega_limit(rel, target);
            CellSet hood = dilate(target, 0.45);
            FindBlockResult fb = find_block(rel, a, hood);
            if (!fb.ok) {
                check(out, name, false, fb.diagnostic);
                continue;
            }
            double dh = hausdorff(fb.attractor, target);
            check(out, name, dh <= 2 * w + 1e-12,
                  "hausdorff(attractor, target) = " + fmt_double(dh) + " vs 2w = " +
                      fmt_double(2 * w));
        }

    // basin of the [-m, n] attractor covers the whole declared domain
    CellSet target = cells_of_interval(grid, -m, n);
    CellSet a = omega_limit(rel, target);
    CellSet bas = basin(rel, a);
    CellSet expected = cells_of_interval(grid, -m - 1 + 1e-9, n + 1 - 1e-9);
    CellSet slack = neighbor_closure(expected, 2);
    bool ok = bas.subset_of(slack) && (expected - neighbor_closure(bas, 2)).none();
    check(out, "basin of [-m,n]", ok,
          "basin " + std::to_string(bas.count()) + " cells vs expected " +
              std::to_string(expected.count()) + " (tolerance 2 cells)");
}

void verify_ex_rotation(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    AttractorPipeline pipe = run_attractors(sc, threads);
    check(out, "no nontrivial attractor block", pipe.records.empty(),
          pipe.records.empty() ? "no candidate certified" : "unexpected certified block");
    check(out, "impossibility certificate", pipe.impossibility.has_value(),
          pipe.impossibility.value_or("certificate unavailable"));
    ChainGraph cg = ChainGraph::build(pipe.relation, 2.0 * pipe.relation.grid()->scale(), threads);
    CellSet recurrent = cg.chain_recurrent();
    check(out, "chain_recurrent = all arcs",
          recurrent == CellSet::full_set(pipe.relation.grid()),
          std::to_string(recurrent.count()) + " of " +
              std::to_string(pipe.relation.grid()->cell_count()) + " arcs recurrent");
}

void verify_ex_proj_line(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    GridPtr grid = Grid::make(sc.space, sc.resolution);
    RelationBuildOptions opt = sc.relation;
    opt.threads = threads;
    TransitionRelation rel = TransitionRelation::build(grid, sc.ifs, opt);

    CellSet line = line_x0_cells(grid);
    CellSet tube = neighbor_closure(line, 3);
    CellSet a = omega_limit(rel, line);
    FindBlockResult fb = find_block(rel, a, tube);
    check(out, "line {x=0} certified as attractor with block", fb.ok,
          fb.ok ? "block " + std::to_string(fb.block.count()) + " cells, attractor " +
                      std::to_string(fb.attractor.count()) + " cells"
                : fb.diagnostic);
    if (!fb.ok) return;
    double dh = hausdorff(fb.attractor, line);
    check(out, "attractor matches the line cells", dh <= 2 * cell_width(*grid) + 1e-12,
          "hausdorff = " + fmt_double(dh));

    CellSet bas = basin(rel, fb.attractor);
    StrictReport sr = is_strict(rel, fb.attractor, bas, sc.strict_budget);
    bool good_witness = sr.verdict == StrictVerdict::NotStrict && sr.witness_cell >= 0 &&
                        !fb.attractor.contains(sr.witness_cell) &&
                        sr.witness_omega.subset_of(fb.attractor) &&
                        sr.witness_omega != fb.attractor;
    check(out, "not strict with off-line witness", good_witness, sr.describe());
}

void verify_paper_pair(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    AttractorPipeline pipe = run_attractors(sc, threads);
    GridPtr grid = pipe.relation.grid();
    CellSet attractor_cells = CellSet::empty_set(grid);
    for (const auto& r : pipe.records)
        if (r.attractor.count() > attractor_cells.count()) attractor_cells = r.attractor;
    if (attractor_cells.none()) {
        // fall back to the invariant hull when no block certifies at this grid
        ChainGraph cg0 = ChainGraph::build(pipe.relation, 0.0, threads);
        for (const auto& b : cg0.basic_attractors()) attractor_cells |= b;
    }
    check(out, "attractor cells computed", attractor_cells.any(),
          std::to_string(attractor_cells.count()) + " cells");

    FiberReport fr = point_fibered_test(sc.ifs, attractor_cells, sc.coding_addresses,
                                        sc.coding_points, 60, 1e-6);
    check(out, "point_fibered (tol 1e-6, depth 60)",
          fr.verdict == FiberVerdict::PointFibered, fr.describe());

    Point x0 = grid->cell_center(attractor_cells.first());
    auto pts = chaos_game(sc.ifs, x0, 100000, 100, sc.seed);
    CellSet tube = neighbor_closure(attractor_cells, 1);
    long outside = 0;
    for (const auto& s : pts)
        if (!tube.contains(grid->point_to_cell(s.point))) ++outside;
    check(out, "100k chaos points inside 1-cell dilation of attractor", outside == 0,
          std::to_string(outside) + " of " + std::to_string(pts.size()) + " outside");
}

void verify_moebius_demo(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    AttractorPipeline pipe = run_attractors(sc, threads);
    check(out, "attractor-repeller pair found",
          !pipe.records.empty() && pipe.records.back().dual.has_value() &&
              pipe.records.back().dual->any(),
          !pipe.records.empty() ? "records: " + std::to_string(pipe.records.size())
                                : "no certified block");
    if (pipe.records.empty()) return;
    const ConleyRecord& r = pipe.records.back();
    bool disjoint = (r.attractor & *r.dual).none() && (*r.dual & r.basin_cells).none();
    check(out, "attractor/dual disjointness", disjoint,
          "attractor " + std::to_string(r.attractor.count()) + ", dual " +
              std::to_string(r.dual->count()));
    GridPtr grid = pipe.relation.grid();
    Point x0 = grid->cell_center(r.attractor.first());
    auto pts = chaos_game(sc.ifs, x0, 20000, 50, sc.seed);
    CellSet tube = neighbor_closure(r.attractor, 1);
    long outside = 0;
    for (const auto& s : pts)
        if (!tube.contains(grid->point_to_cell(s.point))) ++outside;
    check(out, "chaos points inside 1-cell dilation of attractor", outside == 0,
          std::to_string(outside) + " outside");
}

void verify_generic(const Scenario& sc, int threads, std::vector<CheckResult>& out) {
    GridPtr grid = Grid::make(sc.space, sc.resolution);
    RelationBuildOptions opt = sc.relation;
    opt.threads = threads;
    TransitionRelation rel = TransitionRelation::build(grid, sc.ifs, opt);
    TransitionRelation again = TransitionRelation::build(grid, sc.ifs, opt);
    check(out, "deterministic relation build", rel == again,
          std::to_string(rel.edge_count()) + " edges");
    fs::path tmp = fs::temp_directory_path() / ("cifs_verify_" + std::to_string(rel.grid()->hash()));
    rel.save(tmp.string());
    TransitionRelation loaded = TransitionRelation::load(tmp.string(), grid);
    fs::remove(tmp);
    check(out, "relation cache round-trip", loaded == rel, "edge-identical");
}

}  // namespace

std::vector<CheckResult> verify_scenario(const Scenario& sc, int threads) {
    std::vector<CheckResult> out;
    if (sc.preset == "ex-multiple")
        verify_ex_multiple(sc, threads, out);
    else if (sc.preset == "ex-rotation")
        verify_ex_rotation(sc, threads, out);
    else if (sc.preset == "ex-proj-line")
        verify_ex_proj_line(sc, threads, out);
    else if (sc.preset == "paper-projective-pair")
        verify_paper_pair(sc, threads, out);
    else if (sc.preset == "moebius-demo")
        verify_moebius_demo(sc, threads, out);
    else
        verify_generic(sc, threads, out);
    return out;
}

}  // namespace conleyifs
