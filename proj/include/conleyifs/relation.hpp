#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conleyifs/dynamics.hpp"
#include "conleyifs/geometry.hpp"

namespace conleyifs {

enum class BuildMode { Sampled, Padded };

struct RelationBuildOptions {
    BuildMode mode = BuildMode::Padded;
    double padding = -1.0;     // < 0: per-cell default (lipschitz bound * cell radius)
    int samples_per_cell = 3;  // lattice points per chart axis
    int threads = 1;
};

// Cell-level outer approximation of the set map F(B) = union of f(B): for
// each map n and cell c, the target cells of every sample of c, optionally
// dilated by a Lipschitz padding radius so continuous images stay covered.
class TransitionRelation {
public:
    static TransitionRelation build(GridPtr grid, const IFSSpec& ifs,
                                    const RelationBuildOptions& opt);

    const GridPtr& grid() const { return grid_; }
    int map_count() const { return static_cast<int>(per_map_.size()); }
    bool invertible() const { return invertible_; }
    BuildMode mode() const { return mode_; }
    double padding_param() const { return padding_; }
    int samples_per_cell() const { return samples_; }
    uint64_t clipped_samples() const { return clipped_; }

    const std::vector<uint32_t>& targets(int map, int cell) const {
        return per_map_[map][cell];
    }
    const std::vector<uint32_t>& targets(int cell) const { return union_[cell]; }

    CellSet image(const CellSet& s) const;
    CellSet image_of_cell(int c) const;
    // cells whose targets under every map stay inside s
    CellSet preimage_all(const CellSet& s) const;
    TransitionRelation reversed() const;

    size_t edge_count() const;
    bool operator==(const TransitionRelation& o) const;
    bool operator!=(const TransitionRelation& o) const { return !(*this == o); }

    void save(const std::string& path) const;
    static TransitionRelation load(const std::string& path, GridPtr grid);
    void export_csv(const std::string& path) const;

private:
    TransitionRelation() = default;
    void rebuild_union();

    GridPtr grid_;
    std::vector<std::vector<std::vector<uint32_t>>> per_map_;  // [map][cell] sorted
    std::vector<std::vector<uint32_t>> union_;                 // [cell] sorted
    BuildMode mode_ = BuildMode::Padded;
    double padding_ = -1.0;
    int samples_ = 3;
    bool invertible_ = false;
    uint64_t clipped_ = 0;
};

}  // namespace conleyifs
