#include "conleyifs/coding.hpp"

#include <algorithm>
#include <cmath>

namespace conleyifs {

Address Address::repeating(int alphabet, std::vector<int> prefix) {
    Address a;
    a.alphabet = alphabet;
    a.prefix = std::move(prefix);
    a.extension = Extension::RepeatLast;
    a.validate();
    return a;
}

Address Address::random(int alphabet, uint64_t seed) {
    Address a;
    a.alphabet = alphabet;
    a.extension = Extension::Random;
    a.seed = seed;
    a.validate();
    return a;
}

Address Address::random_with_prefix(int alphabet, std::vector<int> prefix, uint64_t seed) {
    Address a;
    a.alphabet = alphabet;
    a.prefix = std::move(prefix);
    a.extension = Extension::Random;
    a.seed = seed;
    a.validate();
    return a;
}

void Address::validate() const {
    if (alphabet < 1) throw ConfigError("address alphabet must have at least one letter");
    for (int l : prefix)
        if (l < 1 || l > alphabet) throw ConfigError("address letter out of range 1..N");
    if (extension == Extension::RepeatLast && prefix.empty())
        throw ConfigError("repeat-last address needs a nonempty prefix");
}

int Address::letter(int k) const {
    if (k < 1) throw DomainError("address positions are 1-based");
    if (k <= static_cast<int>(prefix.size())) return prefix[k - 1];
    if (extension == Extension::RepeatLast) return prefix.back();
    // stateless per-position hash: random access, scheduling independent
    return 1 + static_cast<int>(mix64(seed ^ (0x9E3779B97F4A7C15ULL * uint64_t(k))) %
                                uint64_t(alphabet));
}

std::string Address::head(int k) const {
    std::string out;
    for (int i = 1; i <= k; ++i) {
        if (i > 1) out += ' ';
        out += std::to_string(letter(i));
    }
    return out;
}

double code_distance(const Address& s, const Address& o, int depth) {
    for (int k = 1; k <= depth; ++k)
        if (s.letter(k) != o.letter(k)) return std::exp2(-k);
    return 0.0;
}

Point fiber(const IFSSpec& ifs, const Address& address, int depth, const Point& x) {
    if (depth < 1) throw DomainError("fiber depth must be >= 1");
    Point y = x;
    for (int k = depth; k >= 1; --k) {
        int l = address.letter(k);
        if (l < 1 || l > ifs.map_count())
            throw DomainError("address letter exceeds the ifs map count");
        y = eval(ifs.space, ifs.maps[l - 1], y);
    }
    return y;
}

std::string FiberReport::describe() const {
    switch (verdict) {
        case FiberVerdict::PointFibered:
            return "point_fibered (max final diameter " + fmt_double(final_max_diameter) +
                   " < tol " + fmt_double(tol) + ")";
        case FiberVerdict::NotPointFibered:
            return "not_point_fibered (address " + std::to_string(witness_address) +
                   " = " + witness_prefix + "..., final diameter " +
                   fmt_double(final_max_diameter) + " does not shrink)";
        case FiberVerdict::Inconclusive:
            return "inconclusive (final diameter " + fmt_double(final_max_diameter) +
                   " above tol without a non-shrinking witness)";
    }
    return "?";
}

namespace {
// n spread cells of the region, deterministic
std::vector<int> spread_cells(const CellSet& region, int n) {
    auto idx = region.indices();
    std::vector<int> out;
    size_t cnt = idx.size();
    if (cnt == 0) return out;
    if (static_cast<int>(cnt) <= n) return idx;
    for (int i = 0; i < n; ++i) out.push_back(idx[(i * cnt) / n]);
    return out;
}
}  // namespace

FiberReport point_fibered_test(const IFSSpec& ifs, const CellSet& region, int n_addresses,
                               int n_points, int depth, double tol, uint64_t seed) {
    ifs.validate();
    if (region.none()) throw ContractError("point_fibered_test requires a nonempty region");
    if (n_addresses < 2 || n_points < 2)
        throw ContractError("point_fibered_test requires at least 2 addresses and 2 points");
    if (depth < 1) throw ContractError("point_fibered_test requires depth >= 1");

    const Grid& g = *region.grid();
    FiberReport rep;
    rep.n_addresses = n_addresses;
    rep.n_points = n_points;
    rep.depth = depth;
    rep.tol = tol;
    rep.max_diameter_by_depth.assign(depth + 1, 0.0);

    std::vector<Point> starts;
    for (int c : spread_cells(region, n_points)) starts.push_back(g.cell_center(c));
    int np = static_cast<int>(starts.size());

    auto diameter = [&](const std::vector<Point>& pts, int* ia = nullptr, int* ib = nullptr) {
        double d = 0;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            for (int j = i + 1; j < static_cast<int>(pts.size()); ++j) {
                double dd = distance(ifs.space, pts[i], pts[j]);
                if (dd > d) {
                    d = dd;
                    if (ia) *ia = i;
                    if (ib) *ib = j;
                }
            }
        return d;
    };

    rep.initial_diameter = diameter(starts);
    rep.max_diameter_by_depth[0] = rep.initial_diameter;

    bool all_contract = true;
    for (int ai = 0; ai < n_addresses; ++ai) {
        Address addr = Address::random(ifs.map_count(), mix64(seed ^ uint64_t(ai + 1)));
        std::vector<Point> img(np);
        double depth1 = 0, final_d = 0;
        int wa = 0, wb = 1;
        for (int k = 1; k <= depth; ++k) {
            for (int i = 0; i < np; ++i) img[i] = fiber(ifs, addr, k, starts[i]);
            int ia = 0, ib = 1;
            double d = diameter(img, &ia, &ib);
            rep.max_diameter_by_depth[k] = std::max(rep.max_diameter_by_depth[k], d);
            if (k == 1) depth1 = d;
            if (k == depth) {
                final_d = d;
                wa = ia;
                wb = ib;
            }
        }
        rep.final_max_diameter = std::max(rep.final_max_diameter, final_d);
        if (final_d >= tol) {
            all_contract = false;
            // constructive witness: the diameter refuses to shrink
            if (final_d >= depth1 * (1.0 - 1e-9) && rep.verdict != FiberVerdict::NotPointFibered) {
                rep.verdict = FiberVerdict::NotPointFibered;
                rep.witness_address = ai;
                rep.witness_prefix = addr.head(std::min(depth, 8));
                rep.witness_x0 = starts[wa];
                rep.witness_x1 = starts[wb];
            }
        }
    }
    if (all_contract)
        rep.verdict = FiberVerdict::PointFibered;
    else if (rep.verdict != FiberVerdict::NotPointFibered)
        rep.verdict = FiberVerdict::Inconclusive;
    return rep;
}

CommuteReport coding_commute_check(const IFSSpec& ifs, const FiberReport& fibers,
                                   const CellSet& region, int n_addresses, int depth,
                                   double tol, uint64_t seed) {
    if (fibers.verdict != FiberVerdict::PointFibered)
        throw ContractError(
            "coding_commute_check requires a point_fibered fiber report for the region (got: " +
            fibers.describe() + ")");
    const Grid& g = *region.grid();
    auto cells = spread_cells(region, 2);
    Point x0 = g.cell_center(cells.front());
    Point x1 = g.cell_center(cells.back());

    double lip = 0;
    for (const auto& m : ifs.maps)
        lip = std::max(lip, lipschitz_estimate(m, g, region).value);

    CommuteReport rep;
    rep.bound = tol + std::max(1.0, lip) * fibers.final_max_diameter;
    for (int ai = 0; ai < n_addresses; ++ai) {
        Address addr = Address::random(ifs.map_count(), mix64(seed ^ uint64_t(0xABC + ai)));
        // pi(n sigma) evaluated from x0: by the composition law,
        // fiber(n sigma, depth+1, x0) = f_n(fiber(sigma, depth, x0))
        Point head = fiber(ifs, addr, depth, x0);
        Point tail = fiber(ifs, addr, depth, x1);
        for (int n = 1; n <= ifs.map_count(); ++n) {
            Point lhs = eval(ifs.space, ifs.maps[n - 1], head);
            Point rhs = eval(ifs.space, ifs.maps[n - 1], tail);
            double err = distance(ifs.space, lhs, rhs);
            rep.max_error = std::max(rep.max_error, err);
            ++rep.checks;
        }
    }
    rep.pass = rep.max_error <= rep.bound;
    rep.summary = "commute check: max error " + fmt_double(rep.max_error) + " vs bound " +
                  fmt_double(rep.bound) + " over " + std::to_string(rep.checks) +
                  (rep.pass ? " checks: pass" : " checks: FAIL");
    return rep;
}

std::vector<ChaosSample> chaos_game(const IFSSpec& ifs, const Point& x0, long n_steps,
                                    long burn_in, uint64_t seed) {
    ifs.validate();
    if (!(n_steps > burn_in) || burn_in < 0)
        throw ContractError("chaos_game requires n_steps > burn_in >= 0");
    std::vector<ChaosSample> out;
    out.reserve(static_cast<size_t>(n_steps - burn_in));
    Rng rng(seed);
    Point x = canonical(ifs.space, x0);
    for (long step = 0; step < n_steps; ++step) {
        int letter = 1 + static_cast<int>(rng.index(static_cast<uint64_t>(ifs.map_count())));
        x = eval(ifs.space, ifs.maps[letter - 1], x);
        if (step >= burn_in) out.push_back({x, letter});
    }
    return out;
}

}  // namespace conleyifs
