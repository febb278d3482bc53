#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "footeval/error.hpp"
#include "footeval/geometry.hpp"
#include "footeval/ingest.hpp"

namespace footeval {

/// Digitization parameters of a tiled segmentation run.
struct TileConfig {
    double resolution_cm_per_px = 300.0;
    int tile_size_px = 512;
    /// Integer percentage in [0, 100).
    int overlap_percent = 0;
    /// Segments smaller than this are removed; 0 retains everything.
    double min_segment_area_m2 = 0.0;

    double resolution_m() const { return resolution_cm_per_px / 100.0; }
    /// round(tile_size_px * (1 - overlap_percent / 100)).
    int stride_px() const;
    /// Throws ConfigError when a field is out of range or the stride would be < 1.
    void validate() const;
};

struct Tile {
    int col = 0;
    int row = 0;
    /// Offset of the tile's south-west pixel from the extent's south-west corner, in pixels.
    /// Fractional only for a last column/row shifted back inside the extent.
    double pixel_col = 0.0;
    double pixel_row = 0.0;
    int width_px = 0;
    int height_px = 0;
    Rect world;

    std::string id() const { return "c" + std::to_string(col) + "_r" + std::to_string(row); }
};

struct TileGrid {
    Rect extent;
    int cols = 0;
    int rows = 0;
    /// Row-major, row 0 at the southern edge.
    std::vector<Tile> tiles;
};

/// Lays tiles at stride spacing from the south-west corner. The last column and row are
/// shifted inward so they end on the extent edge. An extent narrower than one tile gets a
/// single tile anchored at its minimum corner.
TileGrid plan_tiles(const Rect& extent, const TileConfig& cfg);

/// Row-major bit grid. Row 0 is the southern-most row; `origin` is the south-west corner
/// of pixel (0, 0).
class BinaryMask {
public:
    BinaryMask(int width, int height, Coordinate origin, double resolution_m);

    int width() const { return width_; }
    int height() const { return height_; }
    Coordinate origin() const { return origin_; }
    double resolution_m() const { return resolution_; }

    bool at(int col, int row) const { return bits_[index(col, row)] != 0; }
    void set(int col, int row, bool on = true) { bits_[index(col, row)] = on ? 1 : 0; }
    std::size_t count() const;

    Coordinate pixel_center(int col, int row) const {
        return {origin_.x + (col + 0.5) * resolution_, origin_.y + (row + 0.5) * resolution_};
    }
    Rect world_bounds() const {
        return {origin_.x, origin_.y, origin_.x + width_ * resolution_, origin_.y + height_ * resolution_};
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int col, int row) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int width_;
    int height_;
    Coordinate origin_;
    double resolution_;
    std::vector<std::uint8_t> bits_;
};

/// Turns on every pixel whose center lies inside `p` (even-odd, half-open on the right).
void rasterize(const Polygon& p, BinaryMask& mask);

/// One polygon per 4-connected foreground component, traced along pixel edges, holes kept.
/// Where a component's boundary passes twice through a pixel corner the two passes are
/// pulled apart by a thousandth of a pixel so every ring stays simple.
std::vector<Polygon> polygonize(const BinaryMask& mask);

/// Produces the building mask for one tile window. Must be deterministic and callable
/// concurrently.
using Segmenter = std::function<BinaryMask(const Rect& world_window, int width_px, int height_px)>;

/// Model error injection for the oracle segmenter.
struct NoiseSpec {
    std::size_t n_spurious = 0;
    std::size_t n_split = 0;
    std::size_t n_omit = 0;
    int blob_size_min_px = 2;
    int blob_size_max_px = 4;
    std::uint64_t seed = 0;
};

/// A one-pixel-wide erase band across a building, perpendicular to its longer side.
struct SplitLine {
    std::size_t building = 0;
    bool vertical = true;  ///< band runs north-south, cutting the x axis
    double position = 0.0;
};

/// World-space realization of a NoiseSpec, shared by every tile.
struct NoisePlan {
    std::vector<std::size_t> omitted;
    std::vector<SplitLine> splits;
    std::vector<Rect> blobs;
};

/// Throws ConfigError when the scene cannot absorb the requested noise.
NoisePlan plan_noise(const FeatureSet& scene, const NoiseSpec& noise, const Rect& extent, double resolution_m);

/// Segmenter that rasterizes `scene` and applies the planned noise.
Segmenter oracle_segmenter(const FeatureSet& scene, const NoiseSpec& noise, const Rect& extent,
                           double resolution_m);

struct TilePolygon {
    std::string tile_id;
    Polygon polygon;
};

/// Raster lattice on which merged groups are re-drawn.
struct MergeOptions {
    double pixel_size_m = 1.0;
    Coordinate lattice_origin{};
};

/// Groups polygons connected by positive-area overlap and replaces each group by its union,
/// drawn on the merge lattice. Isolated polygons pass through unchanged. Output order is
/// canonical (south-west first) and independent of input order.
std::vector<Polygon> merge_across_tiles(const std::vector<TilePolygon>& per_tile, const MergeOptions& options);

/// Keeps polygons with area ≥ min_area_m2, preserving order.
std::vector<Polygon> filter_small_segments(std::vector<Polygon> polys, double min_area_m2);

/// A segmenter failed on one tile.
class SegmenterError : public Error {
public:
    SegmenterError(const std::string& tile_id, const std::string& what)
        : Error("tile " + tile_id + ": " + what), tile_id_(tile_id) {}
    const std::string& tile_id() const { return tile_id_; }

private:
    std::string tile_id_;
};

struct PipelineOptions {
    unsigned threads = 0;
    std::string id_prefix = "pred-";
};

/// plan_tiles → segment → polygonize → merge_across_tiles → filter_small_segments.
FeatureSet run_pipeline(const Rect& extent, const Segmenter& segmenter, const TileConfig& cfg,
                        const PipelineOptions& options = {});

}  // namespace footeval
