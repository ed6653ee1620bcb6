#include "conleyifs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

namespace conleyifs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
constexpr double kSignTol = 1e-12;

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}
}  // namespace

Space Space::interval(double a, double b) {
    Space s;
    s.kind = SpaceKind::Interval;
    s.a = a;
    s.b = b;
    s.validate();
    return s;
}

Space Space::circle() {
    Space s;
    s.kind = SpaceKind::Circle;
    return s;
}

Space Space::box2(double ax, double bx, double ay, double by) {
    Space s;
    s.kind = SpaceKind::Box2;
    s.a = ax;
    s.b = bx;
    s.ay = ay;
    s.by = by;
    s.validate();
    return s;
}

Space Space::riemann_sphere() {
    Space s;
    s.kind = SpaceKind::RiemannSphere;
    return s;
}

Space Space::projective_plane() {
    Space s;
    s.kind = SpaceKind::ProjectivePlane;
    return s;
}

int Space::chart_dim() const {
    switch (kind) {
        case SpaceKind::Interval:
        case SpaceKind::Circle:
            return 1;
        default:
            return 2;
    }
}

bool Space::operator==(const Space& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case SpaceKind::Interval:
            return a == o.a && b == o.b;
        case SpaceKind::Box2:
            return a == o.a && b == o.b && ay == o.ay && by == o.by;
        default:
            return true;
    }
}

std::string Space::describe() const {
    switch (kind) {
        case SpaceKind::Interval:
            return "interval[" + fmt_double(a) + "," + fmt_double(b) + "]";
        case SpaceKind::Circle:
            return "circle";
        case SpaceKind::Box2:
            return "box2[" + fmt_double(a) + "," + fmt_double(b) + "]x[" + fmt_double(ay) + "," +
                   fmt_double(by) + "]";
        case SpaceKind::RiemannSphere:
            return "riemann_sphere";
        case SpaceKind::ProjectivePlane:
            return "projective_plane";
    }
    return "?";
}

void Space::validate() const {
    switch (kind) {
        case SpaceKind::Interval:
            if (!(a < b)) throw ConfigError("interval requires a < b");
            break;
        case SpaceKind::Box2:
            if (!(a < b) || !(ay < by)) throw ConfigError("box2 requires ax < bx and ay < by");
            break;
        default:
            break;
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(ay) || !std::isfinite(by))
        throw ConfigError("space bounds must be finite");
}

Point make_point1(double x) {
    Point p;
    p.v[0] = x;
    return p;
}

Point make_point2(double x, double y) {
    Point p;
    p.v[0] = x;
    p.v[1] = y;
    return p;
}

Point make_point3(double x, double y, double z) {
    Point p;
    p.v[0] = x;
    p.v[1] = y;
    p.v[2] = z;
    return p;
}

Point canonical(const Space& s, const Point& p) {
    Point q = p;
    switch (s.kind) {
        case SpaceKind::Interval:
        case SpaceKind::Box2:
            return q;
        case SpaceKind::Circle:
            q.v[0] = wrap_angle(q.v[0]);
            return q;
        case SpaceKind::RiemannSphere: {
            std::complex<double> z1(p.v[0], p.v[1]), z2(p.v[2], p.v[3]);
            double n = std::sqrt(std::norm(z1) + std::norm(z2));
            if (!(n > 0) || !std::isfinite(n))
                throw DomainError("riemann sphere point is the zero homogeneous vector");
            z1 /= n;
            z2 /= n;
            // fix the global phase: leading component real positive
            std::complex<double> lead = std::abs(z1) > kSignTol ? z1 : z2;
            std::complex<double> ph = std::conj(lead) / std::abs(lead);
            z1 *= ph;
            z2 *= ph;
            q.v = {z1.real(), z1.imag(), z2.real(), z2.imag()};
            return q;
        }
        case SpaceKind::ProjectivePlane: {
            double n = std::sqrt(p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2]);
            if (!(n > 0) || !std::isfinite(n))
                throw DomainError("projective point is the zero homogeneous vector");
            double x = p.v[0] / n, y = p.v[1] / n, z = p.v[2] / n;
            double lead = std::abs(x) > kSignTol ? x : (std::abs(y) > kSignTol ? y : z);
            if (lead < 0) {
                x = -x;
                y = -y;
                z = -z;
            }
            q.v = {x, y, z, 0};
            return q;
        }
    }
    return q;
}

double distance(const Space& s, const Point& pa, const Point& pb) {
    switch (s.kind) {
        case SpaceKind::Interval:
            return std::abs(pa.v[0] - pb.v[0]);
        case SpaceKind::Box2: {
            double dx = pa.v[0] - pb.v[0], dy = pa.v[1] - pb.v[1];
            return std::sqrt(dx * dx + dy * dy);
        }
        case SpaceKind::Circle: {
            double d = std::abs(wrap_angle(pa.v[0]) - wrap_angle(pb.v[0]));
            return std::min(d, kTwoPi - d);
        }
        case SpaceKind::RiemannSphere: {
            Point a = canonical(s, pa), b = canonical(s, pb);
            std::complex<double> z1(a.v[0], a.v[1]), z2(a.v[2], a.v[3]);
            std::complex<double> w1(b.v[0], b.v[1]), w2(b.v[2], b.v[3]);
            return 2.0 * std::abs(z1 * w2 - z2 * w1);
        }
        case SpaceKind::ProjectivePlane: {
            Point a = canonical(s, pa), b = canonical(s, pb);
            double dm = 0, dp = 0;
            for (int i = 0; i < 3; ++i) {
                double m = a.v[i] - b.v[i], p = a.v[i] + b.v[i];
                dm += m * m;
                dp += p * p;
            }
            return std::sqrt(std::min(dm, dp));
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Grid

namespace {

// colatitude/longitude of a unit vector (x,y,z); theta from the +z axis
void sphere_angles_from_vec(double x, double y, double z, double& theta, double& phi) {
    theta = std::acos(std::clamp(z, -1.0, 1.0));
    phi = std::atan2(y, x);
    if (phi < 0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
}

Point sphere_point_from_angles(double theta, double phi) {
    // homogeneous pair (cos t/2, sin t/2 * e^{-i phi}) embeds as
    // (sin t cos phi, sin t sin phi, cos t)
    Point p;
    double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    p.v = {c, 0.0, sn * std::cos(phi), -sn * std::sin(phi)};
    return p;
}

void sphere_angles_from_pair(const Point& p, double& theta, double& phi) {
    std::complex<double> z1(p.v[0], p.v[1]), z2(p.v[2], p.v[3]);
    double n2 = std::norm(z1) + std::norm(z2);
    if (!(n2 > 0) || !std::isfinite(n2))
        throw DomainError("riemann sphere point is the zero homogeneous vector");
    double w = (std::norm(z1) - std::norm(z2)) / n2;
    std::complex<double> xy = 2.0 * z1 * std::conj(z2) / n2;
    sphere_angles_from_vec(xy.real(), xy.imag(), w, theta, phi);
}

// covering radius of the rect [t0,t1]x[p0,p1] in arc length; chordal and
// projective distances are bounded by arc length on the unit sphere
double sphere_rect_radius(double t0, double t1, double p0, double p1) {
    double ht = (t1 - t0) / 2;
    double smax = std::max(std::sin(t0), std::sin(t1));
    if (t0 < kPi / 2 && t1 > kPi / 2) smax = 1.0;
    double hp = (p1 - p0) / 2 * smax;
    return std::sqrt(ht * ht + hp * hp);
}

}  // namespace

GridPtr Grid::make(const Space& space, const std::vector<int>& resolution) {
    space.validate();
    int dim = space.chart_dim();
    if (static_cast<int>(resolution.size()) != dim)
        throw ConfigError("resolution must have " + std::to_string(dim) + " entries for " +
                          space.describe());
    for (int r : resolution)
        if (r < 2) throw ConfigError("resolution must be >= 2 per axis");

    auto g = std::shared_ptr<Grid>(new Grid());
    g->space_ = space;
    g->res_ = resolution;

    switch (space.kind) {
        case SpaceKind::Interval: {
            int n = resolution[0];
            double w = (space.b - space.a) / n;
            g->centers_.reserve(n);
            for (int i = 0; i < n; ++i) {
                g->centers_.push_back(make_point1(space.a + (i + 0.5) * w));
                g->radii_.push_back(w / 2);
            }
            break;
        }
        case SpaceKind::Circle: {
            int n = resolution[0];
            double w = kTwoPi / n;
            for (int i = 0; i < n; ++i) {
                g->centers_.push_back(make_point1((i + 0.5) * w));
                g->radii_.push_back(w / 2);
            }
            break;
        }
        case SpaceKind::Box2: {
            int nx = resolution[0], ny = resolution[1];
            double wx = (space.b - space.a) / nx, wy = (space.by - space.ay) / ny;
            double r = std::sqrt(wx * wx + wy * wy) / 2;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    g->centers_.push_back(
                        make_point2(space.a + (i + 0.5) * wx, space.ay + (j + 0.5) * wy));
                    g->radii_.push_back(r);
                }
            break;
        }
        case SpaceKind::RiemannSphere: {
            g->ntheta_ = resolution[0];
            g->nphi_ = resolution[1];
            double dt = kPi / g->ntheta_, dp = kTwoPi / g->nphi_;
            for (int it = 0; it < g->ntheta_; ++it)
                for (int ip = 0; ip < g->nphi_; ++ip) {
                    double t0 = it * dt, p0 = ip * dp;
                    g->centers_.push_back(sphere_point_from_angles(t0 + dt / 2, p0 + dp / 2));
                    g->radii_.push_back(sphere_rect_radius(t0, t0 + dt, p0, p0 + dp));
                }
            break;
        }
        case SpaceKind::ProjectivePlane: {
            // double-cover sphere grid, antipodal cells folded to one index
            g->ntheta_ = 2 * resolution[0];
            g->nphi_ = 2 * resolution[1];
            int raw_n = g->ntheta_ * g->nphi_;
            g->fold_.assign(raw_n, -1);
            double dt = kPi / g->ntheta_, dp = kTwoPi / g->nphi_;
            for (int it = 0; it < g->ntheta_; ++it)
                for (int ip = 0; ip < g->nphi_; ++ip) {
                    int raw = it * g->nphi_ + ip;
                    if (g->fold_[raw] >= 0) continue;
                    int anti =
                        (g->ntheta_ - 1 - it) * g->nphi_ + ((ip + g->nphi_ / 2) % g->nphi_);
                    int id = static_cast<int>(g->centers_.size());
                    g->fold_[raw] = id;
                    g->fold_[anti] = id;
                    g->rep_raw_.push_back(raw);
                    double t0 = it * dt, p0 = ip * dp;
                    Point sp = sphere_point_from_angles(t0 + dt / 2, p0 + dp / 2);
                    // embed and sign-canonicalize the unit 3-vector
                    double th = t0 + dt / 2, ph = p0 + dp / 2;
                    Point c = make_point3(std::sin(th) * std::cos(ph),
                                          std::sin(th) * std::sin(ph), std::cos(th));
                    (void)sp;
                    g->centers_.push_back(canonical(space, c));
                    g->radii_.push_back(sphere_rect_radius(t0, t0 + dt, p0, p0 + dp));
                }
            break;
        }
    }

    g->scale_ = *std::max_element(g->radii_.begin(), g->radii_.end());
    g->build_neighbors();

    uint64_t h = fnv1a_u64(static_cast<uint64_t>(space.kind));
    for (double d : {space.a, space.b, space.ay, space.by}) {
        uint64_t bits;
        static_assert(sizeof bits == sizeof d);
        std::memcpy(&bits, &d, sizeof bits);
        h = fnv1a_u64(bits, h);
    }
    for (int r : resolution) h = fnv1a_u64(static_cast<uint64_t>(r), h);
    g->hash_ = h;
    return g;
}

int Grid::raw_sphere_index(double theta, double phi) const {
    int it = std::min(ntheta_ - 1, std::max(0, static_cast<int>(theta / kPi * ntheta_)));
    int ip = static_cast<int>(wrap_angle(phi) / kTwoPi * nphi_);
    ip = std::min(nphi_ - 1, std::max(0, ip));
    return it * nphi_ + ip;
}

void Grid::sphere_rect(int raw, double& t0, double& t1, double& p0, double& p1) const {
    double dt = kPi / ntheta_, dp = kTwoPi / nphi_;
    int it = raw / nphi_, ip = raw % nphi_;
    t0 = it * dt;
    t1 = t0 + dt;
    p0 = ip * dp;
    p1 = p0 + dp;
}

int Grid::locate(const Point& p, bool& clipped) const {
    clipped = false;
    switch (space_.kind) {
        case SpaceKind::Interval: {
            double x = p.v[0];
            if (x < space_.a || x > space_.b) clipped = true;
            int n = res_[0];
            double t = (x - space_.a) / (space_.b - space_.a) * n;
            int i = static_cast<int>(std::floor(t));
            return std::min(n - 1, std::max(0, i));
        }
        case SpaceKind::Circle: {
            int n = res_[0];
            int i = static_cast<int>(wrap_angle(p.v[0]) / kTwoPi * n);
            return std::min(n - 1, std::max(0, i));
        }
        case SpaceKind::Box2: {
            double x = p.v[0], y = p.v[1];
            if (x < space_.a || x > space_.b || y < space_.ay || y > space_.by) clipped = true;
            int nx = res_[0], ny = res_[1];
            int i = std::min(nx - 1,
                             std::max(0, static_cast<int>((x - space_.a) / (space_.b - space_.a) * nx)));
            int j = std::min(
                ny - 1, std::max(0, static_cast<int>((y - space_.ay) / (space_.by - space_.ay) * ny)));
            return j * nx + i;
        }
        case SpaceKind::RiemannSphere: {
            double theta, phi;
            sphere_angles_from_pair(p, theta, phi);
            return raw_sphere_index(theta, phi);
        }
        case SpaceKind::ProjectivePlane: {
            // canonicalize first so x and -x get the identical raw index
            Point c = canonical(space_, p);
            double theta, phi;
            sphere_angles_from_vec(c.v[0], c.v[1], c.v[2], theta, phi);
            return fold_[raw_sphere_index(theta, phi)];
        }
    }
    return 0;
}

int Grid::point_to_cell(const Point& p) const {
    bool clipped = false;
    return locate(p, clipped);
}

void Grid::cell_samples(int i, int per_axis, std::vector<Point>& out) const {
    out.clear();
    int k = std::max(1, per_axis);
    switch (space_.kind) {
        case SpaceKind::Interval: {
            double w = (space_.b - space_.a) / res_[0];
            double lo = space_.a + i * w;
            for (int j = 0; j < k; ++j) out.push_back(make_point1(lo + (j + 0.5) / k * w));
            break;
        }
        case SpaceKind::Circle: {
            double w = kTwoPi / res_[0];
            double lo = i * w;
            for (int j = 0; j < k; ++j) out.push_back(make_point1(lo + (j + 0.5) / k * w));
            break;
        }
        case SpaceKind::Box2: {
            int nx = res_[0];
            double wx = (space_.b - space_.a) / nx, wy = (space_.by - space_.ay) / res_[1];
            double lx = space_.a + (i % nx) * wx, ly = space_.ay + (i / nx) * wy;
            for (int jy = 0; jy < k; ++jy)
                for (int jx = 0; jx < k; ++jx)
                    out.push_back(
                        make_point2(lx + (jx + 0.5) / k * wx, ly + (jy + 0.5) / k * wy));
            break;
        }
        case SpaceKind::RiemannSphere:
        case SpaceKind::ProjectivePlane: {
            int raw = space_.kind == SpaceKind::ProjectivePlane ? rep_raw_[i] : i;
            double t0, t1, p0, p1;
            sphere_rect(raw, t0, t1, p0, p1);
            for (int jt = 0; jt < k; ++jt)
                for (int jp = 0; jp < k; ++jp) {
                    double th = t0 + (jt + 0.5) / k * (t1 - t0);
                    double ph = p0 + (jp + 0.5) / k * (p1 - p0);
                    if (space_.kind == SpaceKind::RiemannSphere) {
                        out.push_back(sphere_point_from_angles(th, ph));
                    } else {
                        Point c = make_point3(std::sin(th) * std::cos(ph),
                                              std::sin(th) * std::sin(ph), std::cos(th));
                        out.push_back(canonical(space_, c));
                    }
                }
            break;
        }
    }
}

void Grid::build_neighbors() {
    int m = cell_count();
    std::vector<std::set<int32_t>> nb(m);
    auto link = [&](int a, int b) {
        if (a == b || a < 0 || b < 0) return;
        nb[a].insert(b);
        nb[b].insert(a);
    };
    switch (space_.kind) {
        case SpaceKind::Interval:
            for (int i = 0; i + 1 < m; ++i) link(i, i + 1);
            break;
        case SpaceKind::Circle:
            for (int i = 0; i < m; ++i) link(i, (i + 1) % m);
            break;
        case SpaceKind::Box2: {
            int nx = res_[0], ny = res_[1];
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    for (int dj = -1; dj <= 1; ++dj)
                        for (int di = -1; di <= 1; ++di) {
                            int i2 = i + di, j2 = j + dj;
                            if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) continue;
                            link(j * nx + i, j2 * nx + i2);
                        }
            break;
        }
        case SpaceKind::RiemannSphere:
        case SpaceKind::ProjectivePlane: {
            auto id_of = [&](int raw) {
                return space_.kind == SpaceKind::ProjectivePlane ? fold_[raw] : raw;
            };
            for (int it = 0; it < ntheta_; ++it)
                for (int ip = 0; ip < nphi_; ++ip) {
                    int a = id_of(it * nphi_ + ip);
                    for (int dt = -1; dt <= 1; ++dt)
                        for (int dp = -1; dp <= 1; ++dp) {
                            int it2 = it + dt;
                            if (it2 < 0 || it2 >= ntheta_) continue;
                            int ip2 = ((ip + dp) % nphi_ + nphi_) % nphi_;
                            link(a, id_of(it2 * nphi_ + ip2));
                        }
                }
            // cells in a polar row all meet at the pole
            for (int row : {0, ntheta_ - 1})
                for (int ip = 0; ip < nphi_; ++ip)
                    for (int ip2 = ip + 1; ip2 < nphi_; ++ip2)
                        link(id_of(row * nphi_ + ip), id_of(row * nphi_ + ip2));
            break;
        }
    }
    neighbors_.resize(m);
    for (int i = 0; i < m; ++i) neighbors_[i].assign(nb[i].begin(), nb[i].end());
}

// ---------------------------------------------------------------------------
// CellSet

CellSet CellSet::empty_set(GridPtr g) {
    CellSet s;
    s.grid_ = std::move(g);
    s.n_ = s.grid_->cell_count();
    s.bits_.assign((s.n_ + 63) / 64, 0);
    return s;
}

CellSet CellSet::full_set(GridPtr g) {
    CellSet s = empty_set(std::move(g));
    for (auto& w : s.bits_) w = ~uint64_t(0);
    int tail = s.n_ & 63;
    if (tail) s.bits_.back() &= (uint64_t(1) << tail) - 1;
    return s;
}

void CellSet::check_same_grid(const CellSet& o) const {
    if (!grid_ || !o.grid_ || grid_->hash() != o.grid_->hash())
        throw DomainError("cell sets belong to different grids");
}

int CellSet::count() const {
    int c = 0;
    for (uint64_t w : bits_) c += __builtin_popcountll(w);
    return c;
}

bool CellSet::any() const {
    for (uint64_t w : bits_)
        if (w) return true;
    return false;
}

CellSet& CellSet::operator|=(const CellSet& o) {
    check_same_grid(o);
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
    check_same_grid(o);
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
}

CellSet& CellSet::operator-=(const CellSet& o) {
    check_same_grid(o);
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
    return *this;
}

CellSet CellSet::operator|(const CellSet& o) const {
    CellSet r = *this;
    r |= o;
    return r;
}

CellSet CellSet::operator&(const CellSet& o) const {
    CellSet r = *this;
    r &= o;
    return r;
}

CellSet CellSet::operator-(const CellSet& o) const {
    CellSet r = *this;
    r -= o;
    return r;
}

CellSet CellSet::complement() const {
    CellSet r = full_set(grid_);
    r -= *this;
    return r;
}

bool CellSet::operator==(const CellSet& o) const {
    check_same_grid(o);
    return bits_ == o.bits_;
}

bool CellSet::subset_of(const CellSet& o) const {
    check_same_grid(o);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~o.bits_[i]) return false;
    return true;
}

std::vector<int> CellSet::indices() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int i) { out.push_back(i); });
    return out;
}

int CellSet::first() const {
    for (int w = 0; w < static_cast<int>(bits_.size()); ++w)
        if (bits_[w]) return w * 64 + __builtin_ctzll(bits_[w]);
    return -1;
}

uint64_t CellSet::content_hash() const {
    return fnv1a(bits_.data(), bits_.size() * sizeof(uint64_t));
}

// ---------------------------------------------------------------------------
// set-level operations

double hausdorff(const CellSet& x, const CellSet& y) {
    if (x.none() || y.none())
        throw DomainError("hausdorff distance requires nonempty cell sets");
    if (x.grid()->hash() != y.grid()->hash())
        throw DomainError("cell sets belong to different grids");
    const Grid& g = *x.grid();
    auto xi = x.indices();
    auto yi = y.indices();
    auto directed = [&](const std::vector<int>& from, const std::vector<int>& to) {
        double worst = 0;
        for (int a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (int b : to) {
                double d = distance(g.space(), g.cell_center(a), g.cell_center(b));
                if (d < best) best = d;
                if (best == 0) break;
            }
            if (best > worst) worst = best;
        }
        return worst;
    };
    return std::max(directed(xi, yi), directed(yi, xi));
}

CellSet dilate(const CellSet& s, double r) {
    if (r < 0) throw DomainError("dilate requires r >= 0");
    const GridPtr& g = s.grid();
    if (s.none()) return CellSet::empty_set(g);
    if (std::isinf(r)) return CellSet::full_set(g);
    CellSet out = CellSet::empty_set(g);
    auto src = s.indices();
    int m = g->cell_count();
    for (int c = 0; c < m; ++c) {
        double lim = r + g->cell_radius(c);
        for (int a : src) {
            if (distance(g->space(), g->cell_center(c), g->cell_center(a)) < lim) {
                out.insert(c);
                break;
            }
        }
    }
    return out;
}

CellSet interior(const CellSet& q) {
    const GridPtr& g = q.grid();
    CellSet out = CellSet::empty_set(g);
    q.for_each([&](int c) {
        for (int nb : g->neighbors(c))
            if (!q.contains(nb)) return;
        out.insert(c);
    });
    return out;
}

CellSet neighbor_closure(const CellSet& s) {
    const GridPtr& g = s.grid();
    CellSet out = s;
    s.for_each([&](int c) {
        for (int nb : g->neighbors(c)) out.insert(nb);
    });
    return out;
}

CellSet neighbor_closure(const CellSet& s, int rings) {
    CellSet out = s;
    for (int i = 0; i < rings; ++i) out = neighbor_closure(out);
    return out;
}

void write_cellset_csv(const std::string& path, const CellSet& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    char head[64];
    std::snprintf(head, sizeof head, "# grid=%016llx cells=%d\n",
                  static_cast<unsigned long long>(s.grid()->hash()), s.grid()->cell_count());
    f << head;
    s.for_each([&](int i) { f << i << "\n"; });
}

}  // namespace conleyifs
