#include "conleyifs/scenario.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <json.hpp>

namespace conleyifs {

using nlohmann::json;

const std::vector<std::string> kTaskOrder = {"attractors", "repeller", "chain", "cmw",
                                             "coding",     "chaos",    "render"};

bool known_task(const std::string& name) {
    for (const auto& t : kTaskOrder)
        if (t == name) return true;
    return false;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

double num_at(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) fail(where + "/" + key, "expected a number");
    return j[key].get<double>();
}

std::array<double, 9> matrix3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where, "expected a 3x3 matrix (3 rows)");
    std::array<double, 9> m;
    for (size_t r = 0; r < 3; ++r) {
        if (!j[r].is_array() || j[r].size() != 3)
            fail(where + "/" + std::to_string(r), "expected a row of 3 numbers");
        for (size_t c = 0; c < 3; ++c) {
            if (!j[r][c].is_number())
                fail(where + "/" + std::to_string(r) + "/" + std::to_string(c),
                     "expected a number");
            m[r * 3 + c] = j[r][c].get<double>();
        }
    }
    return m;
}

std::complex<double> cplx(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(where, "expected a real number or [re, im]");
}

Space parse_space(const json& j, const std::string& where) {
    if (!j.contains("kind") || !j["kind"].is_string()) fail(where, "space needs a kind");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "interval") return Space::interval(num_at(j, "a", where), num_at(j, "b", where));
    if (kind == "circle") return Space::circle();
    if (kind == "box2")
        return Space::box2(num_at(j, "ax", where), num_at(j, "bx", where),
                           num_at(j, "ay", where), num_at(j, "by", where));
    if (kind == "riemann_sphere") return Space::riemann_sphere();
    if (kind == "projective_plane") return Space::projective_plane();
    fail(where + "/kind", "unknown space kind '" + kind + "'");
}

MapSpec parse_map(const json& j, const std::string& where) {
    if (!j.contains("variant") || !j["variant"].is_string())
        fail(where, "map needs a variant");
    std::string v = j["variant"].get<std::string>();
    if (v == "affine1d") return MapSpec::affine1d(num_at(j, "a", where), num_at(j, "b", where));
    if (v == "piecewise_quad" || v == "piecewise_parabola") return MapSpec::piecewise_parabola();
    if (v == "piecewise_quad_inverse" || v == "piecewise_parabola_inverse")
        return MapSpec::piecewise_parabola_inverse();
    if (v == "moebius") {
        for (const char* k : {"a", "b", "c", "d"})
            if (!j.contains(k)) fail(where, std::string("moebius needs coefficient ") + k);
        return MapSpec::moebius(cplx(j["a"], where + "/a"), cplx(j["b"], where + "/b"),
                                cplx(j["c"], where + "/c"), cplx(j["d"], where + "/d"));
    }
    if (v == "projective3") {
        if (!j.contains("matrix")) fail(where, "projective3 needs a matrix");
        return MapSpec::projective3(matrix3(j["matrix"], where + "/matrix"));
    }
    if (v == "affine2d") {
        if (!j.contains("matrix") || !j["matrix"].is_array() || j["matrix"].size() != 2)
            fail(where + "/matrix", "expected a 2x2 matrix (2 rows)");
        std::array<double, 4> m;
        for (size_t r = 0; r < 2; ++r) {
            if (!j["matrix"][r].is_array() || j["matrix"][r].size() != 2)
                fail(where + "/matrix/" + std::to_string(r), "expected a row of 2 numbers");
            for (size_t c = 0; c < 2; ++c) m[r * 2 + c] = j["matrix"][r][c].get<double>();
        }
        return MapSpec::affine2d(m, num_at(j, "tx", where), num_at(j, "ty", where));
    }
    fail(where + "/variant", "unknown map variant '" + v + "'");
}

void apply_common(Scenario& s, const json& j) {
    if (j.contains("label")) s.label = j["label"].get<std::string>();
    if (j.contains("resolution")) {
        s.resolution.clear();
        for (const auto& r : j["resolution"]) s.resolution.push_back(r.get<int>());
    }
    if (j.contains("tasks")) {
        s.tasks.clear();
        for (const auto& t : j["tasks"]) {
            std::string name = t.get<std::string>();
            if (!known_task(name)) fail("tasks", "unknown task '" + name + "'");
            s.tasks.push_back(name);
        }
    }
    if (j.contains("seed")) s.seed = j["seed"].get<uint64_t>();
    if (j.contains("out")) s.out_dir = j["out"].get<std::string>();
    if (j.contains("relation")) {
        const json& r = j["relation"];
        if (r.contains("mode")) {
            std::string m = r["mode"].get<std::string>();
            if (m == "sampled")
                s.relation.mode = BuildMode::Sampled;
            else if (m == "padded")
                s.relation.mode = BuildMode::Padded;
            else
                fail("relation/mode", "expected 'sampled' or 'padded'");
        }
        if (r.contains("padding")) s.relation.padding = r["padding"].get<double>();
        if (r.contains("samples_per_cell"))
            s.relation.samples_per_cell = r["samples_per_cell"].get<int>();
    }
    if (j.contains("chain") && j["chain"].contains("epsilon"))
        s.chain_epsilon = j["chain"]["epsilon"].get<double>();
    if (j.contains("coding")) {
        const json& c = j["coding"];
        if (c.contains("addresses")) s.coding_addresses = c["addresses"].get<int>();
        if (c.contains("points")) s.coding_points = c["points"].get<int>();
        if (c.contains("depth")) s.coding_depth = c["depth"].get<int>();
        if (c.contains("tol")) s.coding_tol = c["tol"].get<double>();
    }
    if (j.contains("chaos")) {
        const json& c = j["chaos"];
        if (c.contains("steps")) s.chaos_steps = c["steps"].get<long>();
        if (c.contains("burn_in")) s.chaos_burn_in = c["burn_in"].get<long>();
    }
    if (j.contains("render")) {
        const json& r = j["render"];
        if (r.contains("width")) s.image_width = r["width"].get<int>();
        if (r.contains("height")) s.image_height = r["height"].get<int>();
    }
    if (j.contains("strict_budget")) s.strict_budget = j["strict_budget"].get<int>();
    if (j.contains("block_rings")) s.block_rings = j["block_rings"].get<int>();
    if (j.contains("candidate_cap")) s.candidate_cap = j["candidate_cap"].get<int>();
}

// boundary forward-invariance probe for interval/box domains
void check_forward_invariance(Scenario& s) {
    const Space& sp = s.space;
    std::vector<Point> probes;
    if (sp.kind == SpaceKind::Interval) {
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            probes.push_back(make_point1(sp.a + t * (sp.b - sp.a)));
        }
    } else if (sp.kind == SpaceKind::Box2) {
        for (double t : {0.0, 0.5, 1.0}) {
            probes.push_back(make_point2(sp.a + t * (sp.b - sp.a), sp.ay));
            probes.push_back(make_point2(sp.a + t * (sp.b - sp.a), sp.by));
            probes.push_back(make_point2(sp.a, sp.ay + t * (sp.by - sp.ay)));
            probes.push_back(make_point2(sp.b, sp.ay + t * (sp.by - sp.ay)));
        }
    } else {
        return;  // closed spaces have no boundary to escape
    }
    auto inside = [&](const Point& p) {
        if (sp.kind == SpaceKind::Interval) return p.v[0] >= sp.a && p.v[0] <= sp.b;
        return p.v[0] >= sp.a && p.v[0] <= sp.b && p.v[1] >= sp.ay && p.v[1] <= sp.by;
    };
    for (size_t mi = 0; mi < s.ifs.maps.size(); ++mi)
        for (const Point& p : probes) {
            Point q = eval(sp, s.ifs.maps[mi], p);
            if (!inside(q)) {
                s.warnings.push_back("domain is not forward-invariant: map " +
                                     std::to_string(mi + 1) + " sends " + fmt_double(p.v[0]) +
                                     " outside; padded builds will clip");
                return;
            }
        }
}

}  // namespace

std::vector<PresetInfo> list_presets() {
    return {
        {"ex-multiple",
         "staircase parabola map on an interval; one Conley attractor [-m',n'] per integer "
         "pair, basin (-m'-1, n'+1); params m, n (defaults 2, 3)"},
        {"ex-proj-line",
         "projective map diag(1,2,2) on the projective plane; the line {x=0} is a Conley "
         "attractor but not strict. Note: the printed matrix diag(2,1,1) makes that line "
         "repelling along forward orbits; this preset ships the inverse orientation so the "
         "stated conclusion is realized, and flags the discrepancy"},
        {"ex-rotation", "quarter-turn rotation z -> iz on the circle; no proper attractor "
                        "block exists and every arc is chain-recurrent"},
        {"paper-projective-pair",
         "two-map projective IFS with the bundled integer matrices; non-contractive with a "
         "unique nontrivial strict attractor (fractal union of lines)"},
        {"moebius-demo",
         "two-map Moebius IFS on the Riemann sphere (z/2 and (z+1)/2); representative "
         "attractor-repeller pair, not a reproduction of any published figure"},
    };
}

Scenario preset_scenario(const std::string& name, const std::string& params_json) {
    json params = json::parse(params_json, nullptr, true, true);
    Scenario s;
    s.preset = name;
    if (name == "ex-multiple") {
        int m = params.contains("m") ? params["m"].get<int>() : 2;
        int n = params.contains("n") ? params["n"].get<int>() : 3;
        if (m < 0 || n < 0) fail("preset ex-multiple", "m and n must be >= 0");
        s.label = "ex-multiple m=" + std::to_string(m) + " n=" + std::to_string(n);
        s.space = Space::interval(-m - 0.6, n + 0.6);
        s.resolution = {2000};
        s.ifs.space = s.space;
        s.ifs.maps = {MapSpec::piecewise_parabola()};
        s.ifs.label = s.label;
        s.tasks = {"attractors", "repeller", "chain", "cmw", "render"};
    } else if (name == "ex-proj-line") {
        s.label = "ex-proj-line";
        s.space = Space::projective_plane();
        s.resolution = {64, 64};
        s.ifs.space = s.space;
        s.ifs.maps = {MapSpec::projective3({1, 0, 0, 0, 2, 0, 0, 0, 2})};
        s.ifs.label = s.label;
        s.tasks = {"attractors", "repeller", "render"};
        s.notes.push_back(
            "orientation: ships diag(1,2,2); with diag(2,1,1) the line {x=0} repels along "
            "forward orbits (off-line points converge to [1:0:0])");
        s.strict_budget = 48;
    } else if (name == "ex-rotation") {
        s.label = "ex-rotation";
        s.space = Space::circle();
        s.resolution = {360};
        s.ifs.space = s.space;
        s.ifs.maps = {MapSpec::moebius({0, 1}, 0, 0, 1)};  // z -> iz
        s.ifs.label = s.label;
        s.tasks = {"attractors", "chain", "render"};
    } else if (name == "paper-projective-pair") {
        s.label = "paper-projective-pair";
        s.space = Space::projective_plane();
        s.resolution = {64, 64};
        s.ifs.space = s.space;
        s.ifs.maps = {MapSpec::projective3({41, -19, 19, -19, 41, 19, 19, 19, 41}),
                      MapSpec::projective3({-10, -1, 19, -10, 21, 1, 10, 10, 10})};
        s.ifs.label = s.label;
        s.tasks = {"attractors", "coding", "chaos", "render"};
    } else if (name == "moebius-demo") {
        s.label = "moebius-demo";
        s.space = Space::riemann_sphere();
        s.resolution = {48, 96};
        s.ifs.space = s.space;
        s.ifs.maps = {MapSpec::moebius(1, 0, 0, 2),   // z -> z/2
                      MapSpec::moebius(1, 1, 0, 2)};  // z -> (z+1)/2
        s.ifs.label = s.label;
        s.tasks = {"attractors", "repeller", "chaos", "render"};
        s.notes.push_back(
            "representative Moebius pair: the published figure's maps are not printed, so "
            "this preset demonstrates the structure rather than reproducing it");
    } else {
        fail("preset", "unknown preset '" + name + "'");
    }
    apply_common(s, params);
    s.ifs.space = s.space;
    s.ifs.validate();
    (void)Grid::make(s.space, s.resolution);  // validate resolution arity early
    check_forward_invariance(s);
    return s;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (j.contains("preset")) {
        return preset_scenario(j["preset"].get<std::string>(), j.dump());
    }
    Scenario s;
    if (!j.contains("space")) fail(origin, "scenario needs a space (or a preset)");
    s.space = parse_space(j["space"], origin + "/space");
    if (!j.contains("ifs") || !j["ifs"].contains("maps") || !j["ifs"]["maps"].is_array() ||
        j["ifs"]["maps"].empty())
        fail(origin + "/ifs/maps", "expected a nonempty list of maps");
    s.ifs.space = s.space;
    int mi = 0;
    for (const auto& m : j["ifs"]["maps"])
        s.ifs.maps.push_back(parse_map(m, origin + "/ifs/maps/" + std::to_string(mi++)));
    if (j["ifs"].contains("label")) s.ifs.label = j["ifs"]["label"].get<std::string>();
    if (!j.contains("resolution")) fail(origin, "scenario needs a resolution");
    apply_common(s, j);
    if (s.tasks.empty()) s.tasks = {"attractors"};
    if (s.label.empty()) s.label = s.ifs.label.empty() ? "scenario" : s.ifs.label;
    s.ifs.validate();
    (void)Grid::make(s.space, s.resolution);
    check_forward_invariance(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_scenario(text, path);
}

}  // namespace conleyifs
