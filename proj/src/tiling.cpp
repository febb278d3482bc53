#include <cmath>

#include "footeval/tiling.hpp"

namespace footeval {

int TileConfig::stride_px() const {
    return static_cast<int>(std::lround(tile_size_px * (1.0 - overlap_percent / 100.0)));
}

void TileConfig::validate() const {
    if (!(resolution_cm_per_px > 0.0) || !std::isfinite(resolution_cm_per_px)) {
        throw ConfigError("resolution_cm_per_px must be positive");
    }
    if (tile_size_px < 1) throw ConfigError("tile_size_px must be a positive integer");
    if (overlap_percent < 0 || overlap_percent >= 100) throw ConfigError("overlap_percent must lie in [0, 100)");
    if (stride_px() < 1) throw ConfigError("overlap_percent leaves a tile stride below one pixel");
    if (!(min_segment_area_m2 >= 0.0)) throw ConfigError("min_segment_area_m2 must be non-negative");
}

namespace {

/// Pixel offsets of tile starts along one axis of `span_px` pixels.
std::vector<double> axis_starts(double span_px, int tile, int stride) {
    constexpr double kSlack = 1e-9;
    if (span_px <= tile + kSlack) return {0.0};
    const auto steps = static_cast<long>(std::ceil((span_px - tile) / stride - kSlack));
    std::vector<double> starts;
    for (long k = 0; k < steps; ++k) starts.push_back(static_cast<double>(k * stride));
    starts.push_back(span_px - tile);
    return starts;
}

}  // namespace

TileGrid plan_tiles(const Rect& extent, const TileConfig& cfg) {
    cfg.validate();
    if (!extent.valid() || !(extent.width() > 0.0) || !(extent.height() > 0.0)) {
        throw ValidationError("tile extent must have positive width and height");
    }
    const double res = cfg.resolution_m();
    const int tile = cfg.tile_size_px;
    const double tile_world = tile * res;
    const std::vector<double> cols = axis_starts(extent.width() / res, tile, cfg.stride_px());
    const std::vector<double> rows = axis_starts(extent.height() / res, tile, cfg.stride_px());

    TileGrid grid;
    grid.extent = extent;
    grid.cols = static_cast<int>(cols.size());
    grid.rows = static_cast<int>(rows.size());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            Tile t;
            t.col = c;
            t.row = r;
            t.pixel_col = cols[c];
            t.pixel_row = rows[r];
            t.width_px = tile;
            t.height_px = tile;
            // The shifted last tile is anchored on the far edge so it ends there exactly.
            const bool last_col = c + 1 == grid.cols && c > 0;
            const bool last_row = r + 1 == grid.rows && r > 0;
            t.world.min_x = last_col ? extent.max_x - tile_world : extent.min_x + cols[c] * res;
            t.world.min_y = last_row ? extent.max_y - tile_world : extent.min_y + rows[r] * res;
            t.world.max_x = last_col ? extent.max_x : t.world.min_x + tile_world;
            t.world.max_y = last_row ? extent.max_y : t.world.min_y + tile_world;
            grid.tiles.push_back(t);
        }
    }
    return grid;
}

}  // namespace footeval
