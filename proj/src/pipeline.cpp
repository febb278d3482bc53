#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "detail/parallel.hpp"
#include "footeval/match.hpp"
#include "footeval/tiling.hpp"

namespace footeval {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::vector<Polygon> draw_union(const std::vector<const Polygon*>& members, const MergeOptions& options) {
    const double res = options.pixel_size_m;
    const Coordinate o = options.lattice_origin;
    Rect box = bounding_box(*members.front());
    for (const Polygon* p : members) box = box.united(bounding_box(*p));
    const long c0 = static_cast<long>(std::floor((box.min_x - o.x) / res)) - 1;
    const long r0 = static_cast<long>(std::floor((box.min_y - o.y) / res)) - 1;
    const long c1 = static_cast<long>(std::ceil((box.max_x - o.x) / res)) + 1;
    const long r1 = static_cast<long>(std::ceil((box.max_y - o.y) / res)) + 1;
    BinaryMask mask(static_cast<int>(c1 - c0), static_cast<int>(r1 - r0), {o.x + c0 * res, o.y + r0 * res}, res);
    for (const Polygon* p : members) rasterize(*p, mask);
    return polygonize(mask);
}

auto canonical_key(const Polygon& p) {
    const Rect b = bounding_box(p);
    return std::make_tuple(b.min_y, b.min_x, b.max_y, b.max_x, polygon_area(p));
}

}  // namespace

std::vector<Polygon> merge_across_tiles(const std::vector<TilePolygon>& per_tile, const MergeOptions& options) {
    if (!(options.pixel_size_m > 0.0)) throw ValidationError("merge pixel size must be positive");
    const std::size_t n = per_tile.size();
    std::vector<Rect> boxes;
    boxes.reserve(n);
    for (const TilePolygon& t : per_tile) boxes.push_back(bounding_box(t.polygon));
    const SpatialIndex index(boxes);

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : index.query(boxes[i])) {
            if (j > i && sets.find(i) != sets.find(j) && overlaps(per_tile[i].polygon, per_tile[j].polygon)) {
                sets.unite(i, j);
            }
        }
    }

    std::vector<std::vector<const Polygon*>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(&per_tile[i].polygon);

    std::vector<Polygon> out;
    for (const auto& members : groups) {
        if (members.size() == 1) {
            out.push_back(*members.front());
        } else if (members.size() > 1) {
            for (Polygon& p : draw_union(members, options)) out.push_back(std::move(p));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Polygon& a, const Polygon& b) { return canonical_key(a) < canonical_key(b); });
    return out;
}

std::vector<Polygon> filter_small_segments(std::vector<Polygon> polys, double min_area_m2) {
    if (min_area_m2 <= 0.0) return polys;
    std::erase_if(polys, [&](const Polygon& p) { return polygon_area(p) < min_area_m2; });
    return polys;
}

FeatureSet run_pipeline(const Rect& extent, const Segmenter& segmenter, const TileConfig& cfg,
                        const PipelineOptions& options) {
    const TileGrid grid = plan_tiles(extent, cfg);
    std::vector<std::vector<Polygon>> per_tile(grid.tiles.size());
    detail::parallel_for(grid.tiles.size(), options.threads, [&](std::size_t i) {
        const Tile& tile = grid.tiles[i];
        try {
            per_tile[i] = polygonize(segmenter(tile.world, tile.width_px, tile.height_px));
        } catch (const std::exception& e) {
            throw SegmenterError(tile.id(), e.what());
        }
    });

    std::vector<TilePolygon> pieces;
    for (std::size_t i = 0; i < per_tile.size(); ++i) {
        for (Polygon& p : per_tile[i]) pieces.push_back({grid.tiles[i].id(), std::move(p)});
    }
    const MergeOptions merge{cfg.resolution_m(), {extent.min_x, extent.min_y}};
    std::vector<Polygon> buildings = filter_small_segments(merge_across_tiles(pieces, merge), cfg.min_segment_area_m2);

    FeatureSet out;
    out.source = Source::prediction;
    out.crs_note = std::string(kPlanarCrsNote);
    out.extent = extent;
    char id[32];
    for (std::size_t i = 0; i < buildings.size(); ++i) {
        std::snprintf(id, sizeof id, "%05zu", i + 1);
        out.features.push_back(Feature{options.id_prefix + id, std::move(buildings[i]), Source::prediction, {}});
    }
    return out;
}

}  // namespace footeval
