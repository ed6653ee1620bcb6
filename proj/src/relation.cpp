#include "conleyifs/relation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace conleyifs {

namespace {

// cells within reach of each center: (target cell, center distance) pairs
// with d < limit + radius(target); one brute pass, shared by every source
std::vector<std::vector<std::pair<uint32_t, float>>> reach_lists(const Grid& g, double limit,
                                                                 int threads) {
    int m = g.cell_count();
    std::vector<std::vector<std::pair<uint32_t, float>>> out(m);
    parallel_for(m, threads, [&](int lo, int hi) {
        for (int c = lo; c < hi; ++c) {
            for (int t = 0; t < m; ++t) {
                double d = distance(g.space(), g.cell_center(c), g.cell_center(t));
                if (d < limit + g.cell_radius(t))
                    out[c].push_back({static_cast<uint32_t>(t), static_cast<float>(d)});
            }
        }
    });
    return out;
}

}  // namespace

TransitionRelation TransitionRelation::build(GridPtr grid, const IFSSpec& ifs,
                                             const RelationBuildOptions& opt) {
    ifs.validate();
    if (!(ifs.space == grid->space()))
        throw ConfigError("ifs acts on " + ifs.space.describe() + " but the grid covers " +
                          grid->space().describe());
    if (opt.samples_per_cell < 1) throw ConfigError("samples_per_cell must be >= 1");
    if (opt.padding >= 0 && !std::isfinite(opt.padding))
        throw ConfigError("padding must be finite");

    const Grid& g = *grid;
    int m = g.cell_count();
    int nmaps = ifs.map_count();
    bool padded = opt.mode == BuildMode::Padded;

    TransitionRelation rel;
    rel.grid_ = grid;
    rel.mode_ = opt.mode;
    rel.padding_ = opt.padding;
    rel.samples_ = opt.samples_per_cell;
    rel.invertible_ = ifs.invertible();
    rel.per_map_.assign(nmaps, std::vector<std::vector<uint32_t>>(m));

    // per-map / per-cell padding radii (only used in padded mode)
    std::vector<std::vector<double>> pad(nmaps);
    double pad_max = 0;
    bool pad_inf = false;
    if (padded) {
        CellSet one = CellSet::empty_set(grid);
        for (int n = 0; n < nmaps; ++n) {
            pad[n].resize(m);
            const MapSpec& map = ifs.maps[n];
            bool per_cell = map.variant == MapSpec::Variant::PiecewiseParabola ||
                            map.variant == MapSpec::Variant::PiecewiseParabolaInverse;
            double global = 0;
            if (!per_cell && opt.padding < 0) {
                CellSet all = CellSet::full_set(grid);
                global = lipschitz_estimate(map, g, all).value;
            }
            for (int c = 0; c < m; ++c) {
                double p;
                if (opt.padding >= 0) {
                    p = opt.padding;
                } else if (per_cell) {
                    CellSet cs = one;
                    cs.insert(c);
                    p = lipschitz_estimate(map, g, cs).value * g.cell_radius(c);
                    cs.erase(c);
                } else {
                    p = global * g.cell_radius(c);
                }
                pad[n][c] = p;
                if (std::isinf(p))
                    pad_inf = true;
                else
                    pad_max = std::max(pad_max, p);
            }
        }
    }

    std::vector<std::vector<std::pair<uint32_t, float>>> reach;
    if (padded && !pad_inf) reach = reach_lists(g, pad_max, opt.threads);

    std::atomic<uint64_t> clipped{0};
    parallel_for(m, opt.threads, [&](int lo, int hi) {
        std::vector<Point> samples;
        std::vector<uint32_t> cells;
        uint64_t local_clip = 0;
        for (int c = lo; c < hi; ++c) {
            g.cell_samples(c, opt.samples_per_cell, samples);
            for (int n = 0; n < nmaps; ++n) {
                cells.clear();
                for (const Point& p : samples) {
                    Point q;
                    try {
                        q = eval(g.space(), ifs.maps[n], p);
                    } catch (const DomainError& e) {
                        throw DomainError(std::string(e.what()) + " (cell " + std::to_string(c) +
                                          ", map " + std::to_string(n + 1) + ")");
                    }
                    bool clip = false;
                    cells.push_back(static_cast<uint32_t>(g.locate(q, clip)));
                    if (clip) ++local_clip;
                }
                std::sort(cells.begin(), cells.end());
                cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
                if (padded) {
                    double p = pad[n][c];
                    if (std::isinf(p)) {
                        auto& dst = rel.per_map_[n][c];
                        dst.resize(m);
                        for (int t = 0; t < m; ++t) dst[t] = static_cast<uint32_t>(t);
                        continue;
                    }
                    std::vector<uint32_t> grown;
                    for (uint32_t t : cells)
                        for (const auto& [cand, d] : reach[t])
                            if (d < p + g.cell_radius(cand)) grown.push_back(cand);
                    std::sort(grown.begin(), grown.end());
                    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
                    rel.per_map_[n][c] = std::move(grown);
                } else {
                    rel.per_map_[n][c] = cells;
                }
            }
        }
        clipped += local_clip;
    });

    rel.clipped_ = clipped.load();
    rel.rebuild_union();
    return rel;
}

void TransitionRelation::rebuild_union() {
    int m = grid_->cell_count();
    union_.assign(m, {});
    for (int c = 0; c < m; ++c) {
        std::vector<uint32_t> acc;
        for (const auto& pm : per_map_)
            acc.insert(acc.end(), pm[c].begin(), pm[c].end());
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        union_[c] = std::move(acc);
    }
}

CellSet TransitionRelation::image(const CellSet& s) const {
    if (s.grid()->hash() != grid_->hash())
        throw DomainError("cell set belongs to a different grid than the relation");
    CellSet out = CellSet::empty_set(grid_);
    s.for_each([&](int c) {
        for (uint32_t t : union_[c]) out.insert(static_cast<int>(t));
    });
    return out;
}

CellSet TransitionRelation::image_of_cell(int c) const {
    CellSet out = CellSet::empty_set(grid_);
    for (uint32_t t : union_[c]) out.insert(static_cast<int>(t));
    return out;
}

CellSet TransitionRelation::preimage_all(const CellSet& s) const {
    if (s.grid()->hash() != grid_->hash())
        throw DomainError("cell set belongs to a different grid than the relation");
    CellSet out = CellSet::empty_set(grid_);
    int m = grid_->cell_count();
    for (int c = 0; c < m; ++c) {
        bool inside = true;
        for (uint32_t t : union_[c])
            if (!s.contains(static_cast<int>(t))) {
                inside = false;
                break;
            }
        if (inside) out.insert(c);
    }
    return out;
}

TransitionRelation TransitionRelation::reversed() const {
    TransitionRelation rev;
    rev.grid_ = grid_;
    rev.mode_ = mode_;
    rev.padding_ = padding_;
    rev.samples_ = samples_;
    rev.invertible_ = invertible_;
    rev.clipped_ = clipped_;
    int m = grid_->cell_count();
    rev.per_map_.assign(per_map_.size(), std::vector<std::vector<uint32_t>>(m));
    for (size_t n = 0; n < per_map_.size(); ++n)
        for (int c = 0; c < m; ++c)
            for (uint32_t t : per_map_[n][c])
                rev.per_map_[n][t].push_back(static_cast<uint32_t>(c));
    rev.rebuild_union();
    return rev;
}

size_t TransitionRelation::edge_count() const {
    size_t n = 0;
    for (const auto& pm : per_map_)
        for (const auto& row : pm) n += row.size();
    return n;
}

bool TransitionRelation::operator==(const TransitionRelation& o) const {
    return grid_->hash() == o.grid_->hash() && per_map_ == o.per_map_ && mode_ == o.mode_ &&
           padding_ == o.padding_ && samples_ == o.samples_;
}

void TransitionRelation::save(const std::string& path) const {
    std::vector<unsigned char> buf;
    const char magic[8] = {'C', 'I', 'F', 'S', 'R', 'E', 'L', '1'};
    buf.insert(buf.end(), magic, magic + 8);
    auto put_u64 = [&](uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
    };
    auto put_u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
    };
    put_u64(grid_->hash());
    put_u32(static_cast<uint32_t>(per_map_.size()));
    put_u32(static_cast<uint32_t>(grid_->cell_count()));
    buf.push_back(mode_ == BuildMode::Padded ? 1 : 0);
    buf.push_back(invertible_ ? 1 : 0);
    buf.push_back(0);
    buf.push_back(0);
    uint64_t pbits;
    std::memcpy(&pbits, &padding_, sizeof pbits);
    put_u64(pbits);
    put_u32(static_cast<uint32_t>(samples_));
    put_u64(clipped_);
    for (const auto& pm : per_map_)
        for (const auto& row : pm) {
            put_varint(buf, row.size());
            uint32_t prev = 0;
            for (size_t i = 0; i < row.size(); ++i) {
                put_varint(buf, i == 0 ? row[0] : row[i] - prev);
                prev = row[i];
            }
        }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

TransitionRelation TransitionRelation::load(const std::string& path, GridPtr grid) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    size_t pos = 0;
    auto need = [&](size_t n) {
        if (pos + n > buf.size()) throw ConfigError("truncated relation file " + path);
    };
    need(8);
    if (std::memcmp(buf.data(), "CIFSREL1", 8) != 0)
        throw ConfigError(path + " is not a relation cache (bad magic)");
    pos = 8;
    auto get_u64 = [&] {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(buf[pos++]) << (8 * i);
        return v;
    };
    auto get_u32 = [&] {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(buf[pos++]) << (8 * i);
        return v;
    };
    uint64_t ghash = get_u64();
    if (ghash != grid->hash())
        throw ConfigError("relation cache " + path + " was built for a different grid");
    uint32_t nmaps = get_u32();
    uint32_t m = get_u32();
    if (m != static_cast<uint32_t>(grid->cell_count()))
        throw ConfigError("relation cache cell count mismatch");
    need(4);
    unsigned char mode = buf[pos++];
    unsigned char inv = buf[pos++];
    pos += 2;
    TransitionRelation rel;
    rel.grid_ = std::move(grid);
    rel.mode_ = mode ? BuildMode::Padded : BuildMode::Sampled;
    rel.invertible_ = inv != 0;
    uint64_t pbits = get_u64();
    std::memcpy(&rel.padding_, &pbits, sizeof pbits);
    rel.samples_ = static_cast<int>(get_u32());
    rel.clipped_ = get_u64();
    rel.per_map_.assign(nmaps, std::vector<std::vector<uint32_t>>(m));
    for (uint32_t n = 0; n < nmaps; ++n)
        for (uint32_t c = 0; c < m; ++c) {
            uint64_t cnt = get_varint(buf.data(), buf.size(), pos);
            auto& row = rel.per_map_[n][c];
            row.resize(cnt);
            uint32_t prev = 0;
            for (uint64_t i = 0; i < cnt; ++i) {
                uint64_t delta = get_varint(buf.data(), buf.size(), pos);
                prev = i == 0 ? static_cast<uint32_t>(delta)
                              : prev + static_cast<uint32_t>(delta);
                if (prev >= m) throw ConfigError("relation cache has out-of-range cell index");
                row[i] = prev;
            }
        }
    rel.rebuild_union();
    return rel;
}

void TransitionRelation::export_csv(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << "src,map,dst\n";
    for (size_t n = 0; n < per_map_.size(); ++n)
        for (size_t c = 0; c < per_map_[n].size(); ++c)
            for (uint32_t t : per_map_[n][c]) f << c << "," << (n + 1) << "," << t << "\n";
}

}  // namespace conleyifs
