#include "conleyifs/render.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

namespace conleyifs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
}  // namespace

RenderLayer RenderLayer::cell_layer(CellSet s, Rgb c) {
    RenderLayer l;
    l.kind = Kind::Cells;
    l.cells = std::move(s);
    l.color = c;
    return l;
}

RenderLayer RenderLayer::point_layer(std::vector<Point> pts, Rgb c) {
    RenderLayer l;
    l.kind = Kind::Points;
    l.points = std::move(pts);
    l.color = c;
    return l;
}

Projection default_projection(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::RiemannSphere:
            return Projection::Equirectangular;
        case SpaceKind::ProjectivePlane:
            return Projection::AntipodalDisk;
        default:
            return Projection::Direct;
    }
}

namespace {

void check_projection(const RenderSpec& spec, const Space& space) {
    SpaceKind k = space.kind;
    bool ok = false;
    switch (spec.projection) {
        case Projection::Direct:
            ok = k == SpaceKind::Interval || k == SpaceKind::Circle || k == SpaceKind::Box2;
            break;
        case Projection::Equirectangular:
            ok = k == SpaceKind::RiemannSphere || k == SpaceKind::Circle;
            break;
        case Projection::AntipodalDisk:
            ok = k == SpaceKind::ProjectivePlane;
            break;
    }
    if (!ok) throw ConfigError("projection does not match space " + space.describe());
}

// pixel center -> space point; false when the pixel lies outside the chart
bool pixel_point(const Space& sp, int w, int h, int px, int py, Point& out) {
    double u = (px + 0.5) / w, v = (py + 0.5) / h;
    switch (sp.kind) {
        case SpaceKind::Interval:
            out = make_point1(sp.a + u * (sp.b - sp.a));
            return true;
        case SpaceKind::Circle:
            out = make_point1(u * kTwoPi);
            return true;
        case SpaceKind::Box2:
            out = make_point2(sp.a + u * (sp.b - sp.a), sp.by - v * (sp.by - sp.ay));
            return true;
        case SpaceKind::RiemannSphere: {
            double phi = u * kTwoPi, theta = v * kPi;
            Point q;
            double c = std::cos(theta / 2), s = std::sin(theta / 2);
            q.v = {c, 0.0, s * std::cos(phi), -s * std::sin(phi)};
            out = q;
            return true;
        }
        case SpaceKind::ProjectivePlane: {
            double x = 2 * u - 1, y = 1 - 2 * v;
            double r2 = x * x + y * y;
            if (r2 > 1.0) return false;
            out = canonical(sp, make_point3(x, y, std::sqrt(std::max(0.0, 1.0 - r2))));
            return true;
        }
    }
    return false;
}

// space point -> pixel; false when unrepresentable
bool point_pixel(const Space& sp, int w, int h, const Point& p, int& px,
                 int& py) {
    double u = 0, v = 0.5;
    switch (sp.kind) {
        case SpaceKind::Interval:
            u = (p.v[0] - sp.a) / (sp.b - sp.a);
            break;
        case SpaceKind::Circle:
            u = canonical(sp, p).v[0] / kTwoPi;
            break;
        case SpaceKind::Box2:
            u = (p.v[0] - sp.a) / (sp.b - sp.a);
            v = (sp.by - p.v[1]) / (sp.by - sp.ay);
            break;
        case SpaceKind::RiemannSphere: {
            Point c = canonical(sp, p);
            std::complex<double> z1(c.v[0], c.v[1]), z2(c.v[2], c.v[3]);
            double wz = std::norm(z1) - std::norm(z2);
            std::complex<double> xy = 2.0 * z1 * std::conj(z2);
            double theta = std::acos(std::clamp(wz, -1.0, 1.0));
            double phi = std::atan2(xy.imag(), xy.real());
            if (phi < 0) phi += kTwoPi;
            u = phi / kTwoPi;
            v = theta / kPi;
            break;
        }
        case SpaceKind::ProjectivePlane: {
            Point c = canonical(sp, p);
            double x = c.v[0], y = c.v[1], z = c.v[2];
            if (z < 0) {
                x = -x;
                y = -y;
            }
            u = (x + 1) / 2;
            v = (1 - y) / 2;
            break;
        }
    }
    px = static_cast<int>(u * w);
    py = static_cast<int>(v * h);
    if (px < 0 || px >= w || py < 0 || py >= h) return false;
    return true;
}

}  // namespace

Image render(const RenderSpec& spec, const Grid& grid) {
    if (spec.width <= 0 || spec.height <= 0)
        throw ConfigError("render requires a positive image size");
    if (spec.layers.empty()) throw ConfigError("render requires at least one layer");
    check_projection(spec, grid.space());
    for (const auto& layer : spec.layers)
        if (layer.kind == RenderLayer::Kind::Cells &&
            layer.cells.grid()->hash() != grid.hash())
            throw ConfigError("render layer cell set belongs to a different grid");

    Image img;
    img.width = spec.width;
    img.height = spec.height;
    img.rgb.assign(static_cast<size_t>(spec.width) * spec.height * 3, 0);

    for (int py = 0; py < spec.height; ++py)
        for (int px = 0; px < spec.width; ++px) {
            Rgb color = spec.background;
            Point pt;
            if (pixel_point(grid.space(), spec.projection, spec.width, spec.height, px, py,
                            pt)) {
                int cell = grid.point_to_cell(pt);
                for (const auto& layer : spec.layers)
                    if (layer.kind == RenderLayer::Kind::Cells && layer.cells.contains(cell))
                        color = layer.color;
            } else {
                color = {40, 40, 40};  // outside the antipodal disk
            }
            size_t off = (static_cast<size_t>(py) * spec.width + px) * 3;
            img.rgb[off] = color.r;
            img.rgb[off + 1] = color.g;
            img.rgb[off + 2] = color.b;
        }

    for (const auto& layer : spec.layers) {
        if (layer.kind != RenderLayer::Kind::Points) continue;
        for (const Point& p : layer.points) {
            int px, py;
            if (!point_pixel(grid.space(), spec.projection, spec.width, spec.height, p, px, py))
                continue;
            size_t off = (static_cast<size_t>(py) * spec.width + px) * 3;
            img.rgb[off] = layer.color.r;
            img.rgb[off + 1] = layer.color.g;
            img.rgb[off + 2] = layer.color.b;
        }
    }
    return img;
}

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << "P6\n" << img.width << " " << img.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
}

}  // namespace conleyifs
