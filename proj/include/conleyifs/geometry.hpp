#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "conleyifs/util.hpp"

namespace conleyifs {

enum class SpaceKind { Interval, Circle, Box2, RiemannSphere, ProjectivePlane };

// A compact metric space. Coordinates of a Point depend on the kind:
//   Interval        v[0] = x in [a,b]
//   Circle          v[0] = angle in [0, 2pi), arc-length metric (unit circle)
//   Box2            v[0], v[1] in [a,b] x [ay,by]
//   RiemannSphere   v = (Re z1, Im z1, Re z2, Im z2), |z1|^2+|z2|^2 = 1,
//                   chordal metric 2|z1 w2 - z2 w1|
//   ProjectivePlane v[0..2] = unit 3-vector, sign-canonical (first nonzero
//                   coordinate positive), metric min(|u-v|, |u+v|)
struct Space {
    SpaceKind kind = SpaceKind::Interval;
    double a = 0.0, b = 1.0;    // interval bounds / box x-bounds
    double ay = 0.0, by = 1.0;  // box y-bounds

    static Space interval(double a, double b);
    static Space circle();
    static Space box2(double ax, double bx, double ay, double by);
    static Space riemann_sphere();
    static Space projective_plane();

    int chart_dim() const;  // 1 for interval/circle, 2 otherwise
    bool operator==(const Space& o) const;
    std::string describe() const;
    void validate() const;  // throws ConfigError on bad bounds
};

struct Point {
    std::array<double, 4> v{0, 0, 0, 0};
};

Point make_point1(double x);
Point make_point2(double x, double y);
Point make_point3(double x, double y, double z);

// Canonical representative of p in the given space. Throws DomainError for
// degenerate homogeneous input (zero vector).
Point canonical(const Space& s, const Point& p);

double distance(const Space& s, const Point& p, const Point& q);

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// Finite cell cover of a Space. Cells partition the space (each point lies
// in exactly one cell); each cell has a center point and a covering radius.
// For the projective plane the grid is a latitude/longitude grid on the
// double-cover sphere with antipodal index folding.
class Grid {
public:
    static GridPtr make(const Space& space, const std::vector<int>& resolution);

    const Space& space() const { return space_; }
    const std::vector<int>& resolution() const { return res_; }
    int cell_count() const { return static_cast<int>(centers_.size()); }
    double scale() const { return scale_; }  // max covering radius h
    const Point& cell_center(int i) const { return centers_[i]; }
    double cell_radius(int i) const { return radii_[i]; }
    const std::vector<int32_t>& neighbors(int i) const { return neighbors_[i]; }
    uint64_t hash() const { return hash_; }

    // Cell index of a canonical point of the space. Throws DomainError for
    // degenerate homogeneous input.
    int point_to_cell(const Point& p) const;

    // Like point_to_cell but clamps out-of-domain interval/box coordinates
    // and reports the clip instead of failing.
    int locate(const Point& p, bool& clipped) const;

    // Sample lattice inside cell i: per_axis points per chart axis at the
    // centered offsets (j+1/2)/per_axis, so every sample lies in the cell.
    void cell_samples(int i, int per_axis, std::vector<Point>& out) const;

private:
    Grid() = default;
    void build_neighbors();

    Space space_;
    std::vector<int> res_;
    std::vector<Point> centers_;
    std::vector<double> radii_;
    std::vector<std::vector<int32_t>> neighbors_;
    double scale_ = 0.0;
    uint64_t hash_ = 0;

    // sphere / projective internals
    int ntheta_ = 0, nphi_ = 0;
    std::vector<int32_t> fold_;     // raw sphere cell -> cell id (RP2 only)
    std::vector<int32_t> rep_raw_;  // cell id -> representative raw index

    int raw_sphere_index(double theta, double phi) const;
    void sphere_rect(int raw, double& t0, double& t1, double& p0, double& p1) const;
};

// Subset of a grid's cells as a bitmask. Set algebra is exact; operands
// must share the identical grid.
class CellSet {
public:
    CellSet() = default;
    static CellSet empty_set(GridPtr g);
    static CellSet full_set(GridPtr g);

    const GridPtr& grid() const { return grid_; }
    int size() const { return n_; }
    bool contains(int i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
    void insert(int i) { bits_[i >> 6] |= (uint64_t(1) << (i & 63)); }
    void erase(int i) { bits_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    int count() const;
    bool any() const;
    bool none() const { return !any(); }

    CellSet& operator|=(const CellSet& o);
    CellSet& operator&=(const CellSet& o);
    CellSet& operator-=(const CellSet& o);
    CellSet operator|(const CellSet& o) const;
    CellSet operator&(const CellSet& o) const;
    CellSet operator-(const CellSet& o) const;
    CellSet complement() const;
    bool operator==(const CellSet& o) const;
    bool operator!=(const CellSet& o) const { return !(*this == o); }
    bool subset_of(const CellSet& o) const;

    std::vector<int> indices() const;
    int first() const;  // -1 when empty
    uint64_t content_hash() const;

    template <class Fn>
    void for_each(Fn fn) const {
        for (int w = 0; w < static_cast<int>(bits_.size()); ++w) {
            uint64_t word = bits_[w];
            while (word) {
                int b = __builtin_ctzll(word);
                fn(w * 64 + b);
                word &= word - 1;
            }
        }
    }

private:
    void check_same_grid(const CellSet& o) const;
    GridPtr grid_;
    int n_ = 0;
    std::vector<uint64_t> bits_;
};

// Hausdorff distance between nonempty cell sets, evaluated on cell centers;
// the value is within one grid scale of the distance of the cell unions.
double hausdorff(const CellSet& x, const CellSet& y);

// Cells whose center lies within r + (own covering radius) of the center of
// some cell of s (strict inequality). dilate(s, 0) contains s.
CellSet dilate(const CellSet& s, double r);

// Cells of q all of whose grid neighbors lie in q; cells on the domain
// boundary treat their missing neighbors as satisfied.
CellSet interior(const CellSet& q);

// s together with all grid neighbors of its cells ("one-cell dilation").
CellSet neighbor_closure(const CellSet& s);
CellSet neighbor_closure(const CellSet& s, int rings);

void write_cellset_csv(const std::string& path, const CellSet& s);

}  // namespace conleyifs
