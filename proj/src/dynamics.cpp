#include "conleyifs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conleyifs {

namespace {
constexpr double kDetTol = 1e-12;

double parabola_step(double x) {
    double n = std::floor(x);
    if (n >= 0) return x * x - 2 * n * x + n * (n + 1);
    return -x * x + 2 * (n + 1) * x - n * (n + 1);
}

double parabola_step_inv(double y) {
    double m = std::floor(y);
    if (m >= 0) return m + std::sqrt(y - m);
    return (m + 1) - std::sqrt((m + 1) - y);
}

// sup |f'| of the staircase parabola over [lo, hi]: |f'(x)| = 2|x - n| on the
// branch of n >= 0 and 2|n+1 - x| on the branch of n < 0
double parabola_deriv_bound(double lo, double hi) {
    double bound = 0;
    double n = std::floor(lo);
    while (n < hi) {
        double l = std::max(lo, n), h = std::min(hi, n + 1);
        if (l < h || l == lo) {
            double piece = n >= 0 ? 2 * (h - n) : 2 * ((n + 1) - l);
            bound = std::max(bound, piece);
        }
        n += 1;
    }
    return bound;
}

double parabola_inv_deriv_bound(double lo, double hi) {
    // (f^-1)'(y) = 1/(2 sqrt(y - m)) on [m, m+1) for m >= 0 (sup at the left
    // end) and 1/(2 sqrt(m+1 - y)) for m < 0 (sup at the right end);
    // unbounded when the cell touches the branch end
    double bound = 0;
    double m = std::floor(lo);
    while (m < hi) {
        double l = std::max(lo, m), h = std::min(hi, m + 1);
        if (l <= h) {
            double gap = m >= 0 ? l - m : (m + 1) - h;
            if (gap <= 0) return std::numeric_limits<double>::infinity();
            bound = std::max(bound, 1.0 / (2 * std::sqrt(gap)));
        }
        m += 1;
    }
    return bound;
}

// largest/smallest singular value ratio of a 2x2 complex matrix; this is a
// global Lipschitz bound for the induced map in the chordal metric
double moebius_condition(const std::array<std::complex<double>, 4>& m) {
    double t = std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
    double dt = std::abs(m[0] * m[3] - m[1] * m[2]);
    double disc = std::sqrt(std::max(0.0, t * t - 4 * dt * dt));
    double smax2 = (t + disc) / 2, smin2 = (t - disc) / 2;
    if (!(smin2 > 0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(smax2 / smin2);
}

double det3(const std::array<double, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}
}  // namespace

MapSpec MapSpec::affine1d(double a, double b) {
    MapSpec m;
    m.variant = Variant::Affine1D;
    m.a = a;
    m.b = b;
    m.name = "affine1d";
    return m;
}

MapSpec MapSpec::piecewise_parabola() {
    MapSpec m;
    m.variant = Variant::PiecewiseParabola;
    m.name = "piecewise_parabola";
    return m;
}

MapSpec MapSpec::piecewise_parabola_inverse() {
    MapSpec m;
    m.variant = Variant::PiecewiseParabolaInverse;
    m.name = "piecewise_parabola_inverse";
    return m;
}

MapSpec MapSpec::moebius(std::complex<double> a, std::complex<double> b,
                         std::complex<double> c, std::complex<double> d) {
    MapSpec m;
    m.variant = Variant::Moebius;
    m.mo = {a, b, c, d};
    m.name = "moebius";
    m.validate();
    return m;
}

MapSpec MapSpec::projective3(const std::array<double, 9>& mat) {
    MapSpec m;
    m.variant = Variant::Projective3;
    m.proj = mat;
    m.name = "projective3";
    return m;
}

MapSpec MapSpec::affine2d(const std::array<double, 4>& mat, double tx, double ty) {
    MapSpec m;
    m.variant = Variant::Affine2D;
    m.aff2 = {mat[0], mat[1], mat[2], mat[3], tx, ty};
    m.name = "affine2d";
    return m;
}

std::string MapSpec::variant_name() const {
    switch (variant) {
        case Variant::Affine1D: return "affine1d";
        case Variant::PiecewiseParabola: return "piecewise_parabola";
        case Variant::PiecewiseParabolaInverse: return "piecewise_parabola_inverse";
        case Variant::Moebius: return "moebius";
        case Variant::Projective3: return "projective3";
        case Variant::Affine2D: return "affine2d";
    }
    return "?";
}

void MapSpec::validate() const {
    switch (variant) {
        case Variant::Moebius:
            if (std::abs(mo[0] * mo[3] - mo[1] * mo[2]) <= kDetTol)
                throw ConfigError("moebius map requires ad - bc != 0");
            break;
        default:
            break;
    }
}

bool MapSpec::invertible() const {
    switch (variant) {
        case Variant::Affine1D: return std::abs(a) > kDetTol;
        case Variant::PiecewiseParabola:
        case Variant::PiecewiseParabolaInverse: return true;
        case Variant::Moebius: return std::abs(mo[0] * mo[3] - mo[1] * mo[2]) > kDetTol;
        case Variant::Projective3: return std::abs(det3(proj)) > kDetTol;
        case Variant::Affine2D:
            return std::abs(aff2[0] * aff2[3] - aff2[1] * aff2[2]) > kDetTol;
    }
    return false;
}

MapSpec MapSpec::inverse() const {
    if (!invertible())
        throw CapabilityError("map '" + name + "' (" + variant_name() + ") is not invertible");
    switch (variant) {
        case Variant::Affine1D: return affine1d(1.0 / a, -b / a);
        case Variant::PiecewiseParabola: return piecewise_parabola_inverse();
        case Variant::PiecewiseParabolaInverse: return piecewise_parabola();
        case Variant::Moebius: return moebius(mo[3], -mo[1], -mo[2], mo[0]);
        case Variant::Projective3: {
            const auto& m = proj;
            // adjugate: inverse up to projective scale
            std::array<double, 9> adj = {
                m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
                m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
                m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
            return projective3(adj);
        }
        case Variant::Affine2D: {
            double det = aff2[0] * aff2[3] - aff2[1] * aff2[2];
            std::array<double, 4> inv = {aff2[3] / det, -aff2[1] / det, -aff2[2] / det,
                                         aff2[0] / det};
            double tx = -(inv[0] * aff2[4] + inv[1] * aff2[5]);
            double ty = -(inv[2] * aff2[4] + inv[3] * aff2[5]);
            return affine2d(inv, tx, ty);
        }
    }
    throw CapabilityError("unreachable");
}

bool IFSSpec::invertible() const {
    for (const auto& m : maps)
        if (!m.invertible()) return false;
    return !maps.empty();
}

IFSSpec IFSSpec::inverse() const {
    IFSSpec out;
    out.space = space;
    out.label = label.empty() ? "inverse" : label + "*";
    for (size_t i = 0; i < maps.size(); ++i) {
        if (!maps[i].invertible())
            throw CapabilityError("ifs '" + label + "' is not invertible: map " +
                                  std::to_string(i + 1) + " (" + maps[i].variant_name() + ")");
        out.maps.push_back(maps[i].inverse());
    }
    return out;
}

void IFSSpec::validate() const {
    if (maps.empty()) throw ConfigError("ifs requires at least one map");
    space.validate();
    for (size_t i = 0; i < maps.size(); ++i) {
        const auto& m = maps[i];
        m.validate();
        bool ok = false;
        switch (space.kind) {
            case SpaceKind::Interval:
                ok = m.variant == MapSpec::Variant::Affine1D ||
                     m.variant == MapSpec::Variant::PiecewiseParabola ||
                     m.variant == MapSpec::Variant::PiecewiseParabolaInverse;
                break;
            case SpaceKind::Circle:
            case SpaceKind::RiemannSphere:
                ok = m.variant == MapSpec::Variant::Moebius;
                break;
            case SpaceKind::Box2:
                ok = m.variant == MapSpec::Variant::Affine2D;
                break;
            case SpaceKind::ProjectivePlane:
                ok = m.variant == MapSpec::Variant::Projective3;
                break;
        }
        if (!ok)
            throw ConfigError("map " + std::to_string(i + 1) + " (" + m.variant_name() +
                              ") cannot act on " + space.describe());
    }
}

Point eval(const Space& space, const MapSpec& map, const Point& p) {
    switch (map.variant) {
        case MapSpec::Variant::Affine1D:
            return make_point1(map.a * p.v[0] + map.b);
        case MapSpec::Variant::PiecewiseParabola:
            return make_point1(parabola_step(p.v[0]));
        case MapSpec::Variant::PiecewiseParabolaInverse:
            return make_point1(parabola_step_inv(p.v[0]));
        case MapSpec::Variant::Moebius: {
            std::complex<double> z1, z2;
            if (space.kind == SpaceKind::Circle) {
                double t = p.v[0];
                z1 = std::complex<double>(std::cos(t), std::sin(t));
                z2 = 1.0;
            } else {
                z1 = {p.v[0], p.v[1]};
                z2 = {p.v[2], p.v[3]};
            }
            std::complex<double> w1 = map.mo[0] * z1 + map.mo[1] * z2;
            std::complex<double> w2 = map.mo[2] * z1 + map.mo[3] * z2;
            if (space.kind == SpaceKind::Circle) {
                std::complex<double> w = w1 * std::conj(w2);
                if (!(std::abs(w) > 0))
                    throw DomainError("moebius image of circle point is degenerate");
                double t = std::arg(w);
                if (t < 0) t += 2 * M_PI;
                return make_point1(t);
            }
            Point q;
            q.v = {w1.real(), w1.imag(), w2.real(), w2.imag()};
            return canonical(space, q);
        }
        case MapSpec::Variant::Projective3: {
            const auto& m = map.proj;
            Point q = make_point3(m[0] * p.v[0] + m[1] * p.v[1] + m[2] * p.v[2],
                                  m[3] * p.v[0] + m[4] * p.v[1] + m[5] * p.v[2],
                                  m[6] * p.v[0] + m[7] * p.v[1] + m[8] * p.v[2]);
            return canonical(space, q);  // throws DomainError on the zero vector
        }
        case MapSpec::Variant::Affine2D:
            return make_point2(map.aff2[0] * p.v[0] + map.aff2[1] * p.v[1] + map.aff2[4],
                               map.aff2[2] * p.v[0] + map.aff2[3] * p.v[1] + map.aff2[5]);
    }
    return p;
}

LipEstimate lipschitz_estimate(const MapSpec& map, const Grid& grid, const CellSet& s) {
    if (s.none()) throw DomainError("lipschitz_estimate requires a nonempty cell set");
    switch (map.variant) {
        case MapSpec::Variant::Affine1D:
            return {std::abs(map.a), false};
        case MapSpec::Variant::Affine2D: {
            double a = map.aff2[0], b = map.aff2[1], c = map.aff2[2], d = map.aff2[3];
            double t = a * a + b * b + c * c + d * d;
            double det = a * d - b * c;
            double disc = std::sqrt(std::max(0.0, t * t - 4 * det * det));
            return {std::sqrt((t + disc) / 2), false};
        }
        case MapSpec::Variant::PiecewiseParabola:
        case MapSpec::Variant::PiecewiseParabolaInverse: {
            double bound = 0;
            bool inv = map.variant == MapSpec::Variant::PiecewiseParabolaInverse;
            s.for_each([&](int c) {
                double mid = grid.cell_center(c).v[0], r = grid.cell_radius(c);
                double piece = inv ? parabola_inv_deriv_bound(mid - r, mid + r)
                                   : parabola_deriv_bound(mid - r, mid + r);
                bound = std::max(bound, piece);
            });
            return {bound, false};
        }
        case MapSpec::Variant::Moebius:
            return {moebius_condition(map.mo), false};
        case MapSpec::Variant::Projective3: {
            // pair sampling over the cells of s with 10% safety inflation
            std::vector<Point> pts;
            auto idx = s.indices();
            size_t stride = std::max<size_t>(1, idx.size() / 128);
            std::vector<Point> cell_pts;
            for (size_t i = 0; i < idx.size(); i += stride) {
                grid.cell_samples(idx[i], 2, cell_pts);
                pts.insert(pts.end(), cell_pts.begin(), cell_pts.end());
            }
            double best = 0;
            std::vector<Point> img(pts.size());
            for (size_t i = 0; i < pts.size(); ++i) img[i] = eval(grid.space(), map, pts[i]);
            for (size_t i = 0; i < pts.size(); ++i)
                for (size_t j = i + 1; j < pts.size(); ++j) {
                    double d = distance(grid.space(), pts[i], pts[j]);
                    if (d < 1e-13) continue;
                    best = std::max(best, distance(grid.space(), img[i], img[j]) / d);
                }
            return {best * 1.1, true};
        }
    }
    return {0, false};
}

}  // namespace conleyifs
