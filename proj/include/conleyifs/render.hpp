#pragma once

#include <string>
#include <vector>

#include "conleyifs/geometry.hpp"

namespace conleyifs {

struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
};

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 150, 0};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

enum class Projection { Direct, Equirectangular, AntipodalDisk };

// Either a cell-set fill or a list of point pixels, painted in order.
struct RenderLayer {
    enum class Kind { Cells, Points } kind = Kind::Cells;
    CellSet cells;
    std::vector<Point> points;
    Rgb color;

    static RenderLayer cell_layer(CellSet s, Rgb c);
    static RenderLayer point_layer(std::vector<Point> pts, Rgb c);
};

struct RenderSpec {
    int width = 0, height = 0;
    Projection projection = Projection::Direct;
    std::vector<RenderLayer> layers;
    Rgb background = kWhite;
};

Projection default_projection(SpaceKind kind);

struct Image {
    int width = 0, height = 0;
    std::vector<unsigned char> rgb;  // 3 bytes per pixel, row-major
};

// Paints cell layers by locating each pixel's point in the grid (1D cell
// sets become full-height bars), then overlays point layers. Throws on a
// zero-size image or a projection/space mismatch. Output is bit-exact for
// identical inputs.
Image render(const RenderSpec& spec, const Grid& grid);

void write_ppm(const std::string& path, const Image& img);

}  // namespace conleyifs
