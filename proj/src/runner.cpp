#include "conleyifs/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_map>

#include "conleyifs/coding.hpp"
#include "conleyifs/render.hpp"

namespace fs = std::filesystem;

namespace conleyifs {

CellSet cells_of_interval(const GridPtr& grid, double lo, double hi) {
    CellSet out = CellSet::empty_set(grid);
    for (int c = 0; c < grid->cell_count(); ++c) {
        double x = grid->cell_center(c).v[0];
        if (x >= lo && x <= hi) out.insert(c);
    }
    // closure cells of the endpoints, so degenerate intervals stay nonempty
    const Space& sp = grid->space();
    for (double e : {lo, hi})
        if (e >= sp.a && e <= sp.b) out.insert(grid->point_to_cell(make_point1(e)));
    return out;
}

CellSet line_x0_cells(const GridPtr& grid) {
    // cells whose center is within one covering radius of the plane x = 0
    CellSet out = CellSet::empty_set(grid);
    for (int c = 0; c < grid->cell_count(); ++c)
        if (std::abs(grid->cell_center(c).v[0]) <= grid->cell_radius(c)) out.insert(c);
    return out;
}

namespace {

double default_chain_epsilon(const Grid& g) { return 2.0 * g.scale(); }

std::string counts(const CellSet& s) {
    return std::to_string(s.count()) + "/" + std::to_string(s.grid()->cell_count());
}

// Candidate attractors: union closure of the basic attractors when few,
// otherwise the basics plus their total union.
std::vector<CellSet> attractor_candidates(const ChainGraph& cg0, int cap) {
    std::vector<CellSet> basics = cg0.basic_attractors();
    std::vector<CellSet> out;
    std::unordered_map<uint64_t, std::vector<size_t>> seen;
    auto add = [&](CellSet s) {
        if (s.none()) return;
        uint64_t h = s.content_hash();
        for (size_t i : seen[h])
            if (out[i] == s) return;
        seen[h].push_back(out.size());
        out.push_back(std::move(s));
    };
    int b = static_cast<int>(basics.size());
    if (b <= 6) {
        for (uint32_t mask = 1; mask < (1u << b); ++mask) {
            CellSet u = CellSet::empty_set(cg0.grid());
            for (int i = 0; i < b; ++i)
                if (mask & (1u << i)) u |= basics[i];
            add(std::move(u));
        }
    } else {
        for (auto& s : basics) add(std::move(s));
        CellSet total = CellSet::empty_set(cg0.grid());
        for (const auto& s : out) total = total | s;
        add(std::move(total));
    }
    std::sort(out.begin(), out.end(), [](const CellSet& a, const CellSet& b2) {
        int ca = a.count(), cb = b2.count();
        if (ca != cb) return ca < cb;
        return a.first() < b2.first();
    });
    if (static_cast<int>(out.size()) > cap) out.resize(cap);
    return out;
}

struct Outputs {
    fs::path dir;
    std::vector<std::string> names;
    std::ofstream text(const std::string& base) {
        names.push_back(base);
        return std::ofstream(dir / base, std::ios::binary);
    }
    std::string path(const std::string& base) {
        names.push_back(base);
        return (dir / base).string();
    }
};

void write_point_csv(Outputs& out, const std::string& base, const Space& space,
                     const std::vector<ChaosSample>& samples) {
    std::ofstream f(out.dir / base, std::ios::binary);
    out.names.push_back(base);
    int dim = space.kind == SpaceKind::ProjectivePlane ? 3
              : space.kind == SpaceKind::RiemannSphere ? 4
              : space.chart_dim();
    f << "step,letter";
    for (int d = 0; d < dim; ++d) f << ",c" << d;
    f << "\n";
    long step = 0;
    for (const auto& s : samples) {
        f << step++ << "," << s.letter;
        for (int d = 0; d < dim; ++d) f << "," << fmt_double(s.point.v[d]);
        f << "\n";
    }
}

std::string strict_name(StrictVerdict v) {
    switch (v) {
        case StrictVerdict::Strict: return "strict";
        case StrictVerdict::NotStrict: return "not_strict";
        case StrictVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string point_text(const Space& sp, const Point& p) {
    int dim = sp.kind == SpaceKind::ProjectivePlane ? 3
              : sp.kind == SpaceKind::RiemannSphere ? 4
              : sp.chart_dim();
    std::string s = "(";
    for (int d = 0; d < dim; ++d) {
        if (d) s += ", ";
        s += fmt_double(p.v[d]);
    }
    return s + ")";
}

}  // namespace

AttractorPipeline run_attractors(const Scenario& sc, int threads) {
    GridPtr grid = Grid::make(sc.space, sc.resolution);
    RelationBuildOptions opt = sc.relation;
    opt.threads = threads;
    AttractorPipeline pipe{TransitionRelation::build(grid, sc.ifs, opt), {}, {}};
    const TransitionRelation& rel = pipe.relation;

    ChainGraph cg0 = ChainGraph::build(rel, 0.0, threads);
    std::vector<CellSet> candidates = attractor_candidates(cg0, sc.candidate_cap);
    for (const CellSet& cand : candidates) {
        CellSet region = neighbor_closure(cand, sc.block_rings);
        FindBlockResult fb = find_block(rel, cand, region);
        if (!fb.ok) continue;
        ConleyRecord rec;
        rec.block = fb.block;
        rec.attractor = fb.attractor;
        rec.basin_cells = basin(rel, fb.attractor);
        if (rel.invertible()) rec.dual = dual_repeller(rel, fb.block);
        rec.strict = is_strict(rel, rec.attractor, rec.basin_cells, sc.strict_budget);
        rec.provenance = "label=" + sc.label + " grid=" + std::to_string(grid->cell_count()) +
                         " mode=" + (sc.relation.mode == BuildMode::Padded ? "padded" : "sampled") +
                         " samples=" + std::to_string(sc.relation.samples_per_cell) +
                         " rings=" + std::to_string(sc.block_rings);
        pipe.records.push_back(std::move(rec));
    }
    if (pipe.records.empty()) pipe.impossibility = block_impossibility_certificate(rel);
    return pipe;
}

RunReport run(const Scenario& sc, int threads) {
    RunReport report;
    report.warnings = sc.warnings;
    fs::create_directories(sc.out_dir);
    report.out_dir = sc.out_dir;
    Outputs out{fs::path(sc.out_dir), {}};
    fs::remove(out.dir / "FAILED");

    // dependency closure, then canonical order
    std::set<std::string> want(sc.tasks.begin(), sc.tasks.end());
    if (want.count("cmw")) want.insert("chain");
    if (want.count("repeller") || want.count("coding") || want.count("render"))
        want.insert("attractors");

    std::string current = "setup";
    try {
        GridPtr grid = Grid::make(sc.space, sc.resolution);

        current = "relation";
        RelationBuildOptions opt = sc.relation;
        opt.threads = threads;
        TransitionRelation rel = TransitionRelation::build(grid, sc.ifs, opt);
        rel.save(out.path("relation.cifsrel"));
        report.tasks.push_back({"relation", true,
                                std::to_string(rel.edge_count()) + " edges, " +
                                    std::to_string(rel.clipped_samples()) + " clipped samples",
                                {"relation.cifsrel"}});

        std::vector<ConleyRecord> records;
        std::optional<std::string> impossibility;
        if (want.count("attractors")) {
            current = "attractors";
            ChainGraph cg0 = ChainGraph::build(rel, 0.0, threads);
            std::vector<CellSet> candidates = attractor_candidates(cg0, sc.candidate_cap);
            for (const CellSet& cand : candidates) {
                CellSet region = neighbor_closure(cand, sc.block_rings);
                FindBlockResult fb = find_block(rel, cand, region);
                if (!fb.ok) continue;
                ConleyRecord rec;
                rec.block = fb.block;
                rec.attractor = fb.attractor;
                rec.basin_cells = basin(rel, fb.attractor);
                if (rel.invertible() && want.count("repeller"))
                    rec.dual = dual_repeller(rel, fb.block);
                rec.strict = is_strict(rel, rec.attractor, rec.basin_cells, sc.strict_budget);
                records.push_back(std::move(rec));
            }
            if (records.empty()) impossibility = block_impossibility_certificate(rel);

            auto rep = out.text("attractors_report.txt");
            rep << "attractors for " << sc.label << "\n";
            rep << "grid cells: " << grid->cell_count()
                << " scale: " << fmt_double(grid->scale()) << "\n";
            rep << "candidates examined: " << candidates.size() << "\n";
            if (records.empty()) {
                rep << "no nontrivial attractor block found\n";
                if (impossibility) rep << "certificate: " << *impossibility << "\n";
            }
            for (size_t i = 0; i < records.size(); ++i) {
                const ConleyRecord& r = records[i];
                std::string tag = std::to_string(i);
                rep << "record " << tag << ": attractor " << counts(r.attractor) << " block "
                    << counts(r.block) << " basin " << counts(r.basin_cells) << " strict "
                    << strict_name(r.strict.verdict) << "\n";
                auto rec_file = out.text("record_" + tag + ".txt");
                rec_file << "attractor cells: " << counts(r.attractor) << "\n";
                rec_file << "block cells:     " << counts(r.block) << "\n";
                rec_file << "basin cells:     " << counts(r.basin_cells) << "\n";
                if (r.dual) rec_file << "dual cells:      " << counts(*r.dual) << "\n";
                rec_file << "strictness:      " << r.strict.describe() << "\n";
                if (r.strict.witness_cell >= 0)
                    rec_file << "witness center:  "
                             << point_text(sc.space, grid->cell_center(r.strict.witness_cell))
                             << "\n";
                rec_file << "hausdorff error bar: " << fmt_double(grid->scale()) << "\n";
                write_cellset_csv(out.path("attractor_" + tag + ".csv"), r.attractor);
                write_cellset_csv(out.path("block_" + tag + ".csv"), r.block);
                write_cellset_csv(out.path("basin_" + tag + ".csv"), r.basin_cells);
                if (r.dual) write_cellset_csv(out.path("dual_" + tag + ".csv"), *r.dual);
            }
            report.tasks.push_back(
                {"attractors", true,
                 records.empty() ? "no nontrivial attractor block found"
                                 : std::to_string(records.size()) + " certified records",
                 {"attractors_report.txt"}});
            if (want.count("repeller")) {
                current = "repeller";
                if (!rel.invertible())
                    throw CapabilityError("repeller task requires an invertible IFS");
                report.tasks.push_back({"repeller", true,
                                        "duals attached to " + std::to_string(records.size()) +
                                            " records",
                                        {}});
            }
        }

        if (want.count("chain")) {
            current = "chain";
            double eps = sc.chain_epsilon >= 0 ? sc.chain_epsilon : default_chain_epsilon(*grid);
            ChainGraph cg = ChainGraph::build(rel, eps, threads);
            CellSet recurrent = cg.chain_recurrent();
            write_cellset_csv(out.path("chain_recurrent.csv"), recurrent);
            auto rep = out.text("chain_report.txt");
            rep << "chain graph for " << sc.label << "\n";
            rep << "effective epsilon: " << fmt_double(eps) << "\n";
            rep << "edges: " << cg.edge_count() << "\n";
            rep << "components: " << cg.component_count() << " recurrent: "
                << cg.recurrent_components().size() << "\n";
            rep << "chain-recurrent cells: " << counts(recurrent) << "\n";
            report.tasks.push_back({"chain", true, "recurrent " + counts(recurrent),
                                    {"chain_recurrent.csv", "chain_report.txt"}});

            if (want.count("cmw")) {
                current = "cmw";
                CmwReport cmw = cmw_verify(cg, rel);
                auto crep = out.text("cmw_report.txt");
                crep << cmw.summary << "\n";
                crep << "pass: " << (cmw.pass ? "yes" : "no") << "\n";
                write_cellset_csv(out.path("cmw_R.csv"), cmw.recurrent);
                write_cellset_csv(out.path("cmw_I.csv"), cmw.intersection);
                write_cellset_csv(out.path("cmw_symdiff.csv"), cmw.sym_diff);
                size_t cap = std::min<size_t>(cmw.attractors.size(), 40);
                for (size_t i = 0; i < cap; ++i) {
                    write_cellset_csv(out.path("cmw_A_" + std::to_string(i) + ".csv"),
                                      cmw.attractors[i]);
                    write_cellset_csv(out.path("cmw_Astar_" + std::to_string(i) + ".csv"),
                                      cmw.duals[i]);
                }
                report.tasks.push_back({"cmw", cmw.pass, cmw.summary, {"cmw_report.txt"}});
            }
        }

        if (want.count("coding")) {
            current = "coding";
            CellSet region = CellSet::full_set(grid);
            const ConleyRecord* best = nullptr;
            for (const auto& r : records)
                if (!best || r.attractor.count() > best->attractor.count()) best = &r;
            if (best) region = best->attractor;
            FiberReport fr = point_fibered_test(sc.ifs, region, sc.coding_addresses,
                                                sc.coding_points, sc.coding_depth,
                                                sc.coding_tol, mix64(sc.seed ^ kCodingDefaultSeed));
            auto rep = out.text("fiber_report.txt");
            rep << "point-fibered test for " << sc.label << "\n";
            rep << "region cells: " << counts(region) << "\n";
            rep << "addresses: " << fr.n_addresses << " points: " << fr.n_points
                << " depth: " << fr.depth << " tol: " << fmt_double(fr.tol) << "\n";
            rep << "verdict: " << fr.describe() << "\n";
            rep << "depth,max_diameter\n";
            for (size_t k = 0; k < fr.max_diameter_by_depth.size(); ++k)
                rep << k << "," << fmt_double(fr.max_diameter_by_depth[k]) << "\n";
            bool ok = fr.verdict != FiberVerdict::Inconclusive;
            std::string msg = fr.describe();
            if (fr.verdict == FiberVerdict::PointFibered) {
                CommuteReport cr = coding_commute_check(sc.ifs, fr, region, sc.coding_addresses,
                                                        sc.coding_depth, sc.coding_tol,
                                                        mix64(sc.seed ^ 0xD1A6));
                auto crep = out.text("commute_report.txt");
                crep << cr.summary << "\n";
                ok = ok && cr.pass;
                msg += "; " + cr.summary;
            }
            report.tasks.push_back({"coding", ok, msg, {"fiber_report.txt"}});
        }

        std::vector<ChaosSample> chaos;
        if (want.count("chaos")) {
            current = "chaos";
            Point x0 = grid->cell_center(grid->cell_count() / 2);
            chaos = chaos_game(sc.ifs, x0, sc.chaos_steps, sc.chaos_burn_in, sc.seed);
            write_point_csv(out, "chaos.csv", sc.space, chaos);
            report.tasks.push_back(
                {"chaos", true, std::to_string(chaos.size()) + " points", {"chaos.csv"}});
        }

        if (want.count("render")) {
            current = "render";
            RenderSpec spec;
            spec.projection = default_projection(sc.space.kind);
            bool wide = sc.space.kind == SpaceKind::RiemannSphere;
            spec.width = sc.image_width > 0 ? sc.image_width : 800;
            spec.height = sc.image_height > 0 ? sc.image_height
                          : sc.space.kind == SpaceKind::Interval ? 120
                          : wide                                 ? 400
                                                                 : 800;
            if (!records.empty()) {
                const ConleyRecord* best = &records.back();  // largest attractor
                if (best->dual)
                    spec.layers.push_back(RenderLayer::cell_layer(*best->dual, kBlack));
                spec.layers.push_back(RenderLayer::cell_layer(best->attractor, kRed));
            }
            if (!chaos.empty()) {
                std::vector<Point> per_map[2];
                for (const auto& s : chaos) per_map[s.letter == 2 ? 1 : 0].push_back(s.point);
                if (!per_map[0].empty())
                    spec.layers.push_back(RenderLayer::point_layer(per_map[0], kRed));
                if (!per_map[1].empty())
                    spec.layers.push_back(RenderLayer::point_layer(per_map[1], kGreen));
            }
            if (spec.layers.empty())
                spec.layers.push_back(
                    RenderLayer::cell_layer(CellSet::empty_set(grid), kWhite));
            Image img = render(spec, *grid);
            write_ppm(out.path("render.ppm"), img);
            report.tasks.push_back({"render", true,
                                    std::to_string(spec.width) + "x" +
                                        std::to_string(spec.height) + " ppm",
                                    {"render.ppm"}});
        }

        auto summary = out.text("run_report.txt");
        summary << "scenario: " << sc.label << "\n";
        summary << "seed: " << sc.seed << "\n";
        for (const auto& w : report.warnings) summary << "warning: " << w << "\n";
        for (const auto& t : report.tasks)
            summary << t.task << ": " << (t.ok ? "ok" : "FAIL") << " - " << t.message << "\n";
        report.ok = true;
        for (const auto& t : report.tasks) report.ok = report.ok && t.ok;
    } catch (const std::exception& e) {
        std::ofstream marker(out.dir / "FAILED", std::ios::binary);
        marker << "task: " << current << "\n" << e.what() << "\n";
        report.tasks.push_back({current, false, e.what(), {"FAILED"}});
        report.ok = false;
    }
    return report;
}

}  // namespace conleyifs
