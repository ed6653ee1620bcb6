#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "conleyifs/geometry.hpp"

namespace conleyifs {

// One map of an iterated function system. Variants:
//   Affine1D           x -> a*x + b on an interval
//   PiecewiseParabola  the integer-staircase parabola map on the line:
//                      on [n, n+1):  x^2 - 2nx + (n^2+n)        for n >= 0
//                                    -x^2 + 2(n+1)x - (n^2+n)   for n <  0
//   PiecewiseParabolaInverse  its branchwise (monotone) inverse
//   Moebius            2x2 complex homogeneous action on the Riemann sphere
//                      or the unit circle (poles need no special case)
//   Projective3        3x3 real homogeneous action on the projective plane
//   Affine2D           x -> A x + t on a box
struct MapSpec {
    enum class Variant {
        Affine1D,
        PiecewiseParabola,
        PiecewiseParabolaInverse,
        Moebius,
        Projective3,
        Affine2D
    };

    Variant variant = Variant::Affine1D;
    double a = 1.0, b = 0.0;                      // Affine1D
    std::array<std::complex<double>, 4> mo{};     // Moebius a,b,c,d
    std::array<double, 9> proj{};                 // row-major 3x3
    std::array<double, 6> aff2{};                 // A row-major 2x2, then t
    std::string name;

    static MapSpec affine1d(double a, double b);
    static MapSpec piecewise_parabola();
    static MapSpec piecewise_parabola_inverse();
    static MapSpec moebius(std::complex<double> a, std::complex<double> b,
                           std::complex<double> c, std::complex<double> d);
    static MapSpec projective3(const std::array<double, 9>& m);
    static MapSpec affine2d(const std::array<double, 4>& m, double tx, double ty);

    bool invertible() const;
    MapSpec inverse() const;  // throws CapabilityError when not invertible
    std::string variant_name() const;
    void validate() const;
};

struct IFSSpec {
    Space space;
    std::vector<MapSpec> maps;
    std::string label;

    int map_count() const { return static_cast<int>(maps.size()); }
    bool invertible() const;
    IFSSpec inverse() const;  // throws CapabilityError naming the offending map
    void validate() const;    // maps nonempty, variant/space compatibility
};

Point eval(const Space& space, const MapSpec& map, const Point& p);

struct LipEstimate {
    double value = 0.0;
    bool sampled = false;  // true when the bound came from pair sampling
};

// Upper estimate of sup d(f(x),f(y))/d(x,y) over the union of cells of s.
// Analytic derivative bounds for affine/parabola variants and a global
// condition-number bound for Moebius; dense pair sampling with 10% safety
// inflation for projective maps.
LipEstimate lipschitz_estimate(const MapSpec& map, const Grid& grid, const CellSet& s);

}  // namespace conleyifs
