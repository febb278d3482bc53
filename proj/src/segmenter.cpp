#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "detail/rng.hpp"
#include "footeval/match.hpp"
#include "footeval/tiling.hpp"

namespace footeval {

namespace {

// Minimum clearance between a spurious blob and anything else, in pixels. Two pixels keeps
// rasterized blobs from touching or overlapping a neighbour.
constexpr double kBlobClearancePx = 2.0;

}  // namespace

NoisePlan plan_noise(const FeatureSet& scene, const NoiseSpec& noise, const Rect& extent, double resolution_m) {
    if (noise.blob_size_min_px < 1 || noise.blob_size_max_px < noise.blob_size_min_px) {
        throw ConfigError("blob size range must satisfy 1 <= min <= max");
    }
    if (noise.n_omit + noise.n_split > scene.size()) {
        throw ConfigError("n_omit + n_split exceeds the " + std::to_string(scene.size()) + " scene buildings");
    }
    detail::Rng rng(noise.seed);
    NoisePlan plan;

    std::vector<std::size_t> order(scene.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto draw = [&](std::size_t begin, std::size_t count) {
        for (std::size_t k = begin; k < begin + count; ++k) {
            std::swap(order[k], order[k + rng.index(order.size() - k)]);
        }
    };

    draw(0, noise.n_omit);
    plan.omitted.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(noise.n_omit));
    std::sort(plan.omitted.begin(), plan.omitted.end());

    // Only buildings at least three pixels long can be cut into two non-empty parts.
    auto splittable = [&](std::size_t i) {
        const Rect b = bounding_box(scene.features[i].geometry);
        return std::max(b.width(), b.height()) >= 3.0 * resolution_m;
    };
    const auto first_unsplittable = std::stable_partition(
        order.begin() + static_cast<std::ptrdiff_t>(noise.n_omit), order.end(), splittable);
    const auto eligible = static_cast<std::size_t>(first_unsplittable - order.begin()) - noise.n_omit;
    if (eligible < noise.n_split) {
        throw ConfigError("only " + std::to_string(eligible) + " buildings are large enough to split");
    }
    for (std::size_t k = noise.n_omit; k < noise.n_omit + noise.n_split; ++k) {
        std::swap(order[k], order[k + rng.index(eligible - (k - noise.n_omit))]);
        const Rect b = bounding_box(scene.features[order[k]].geometry);
        const bool vertical = b.width() >= b.height();
        plan.splits.push_back({order[k], vertical, vertical ? 0.5 * (b.min_x + b.max_x) : 0.5 * (b.min_y + b.max_y)});
    }
    std::sort(plan.splits.begin(), plan.splits.end(),
              [](const SplitLine& a, const SplitLine& b) { return a.building < b.building; });

    if (noise.n_spurious == 0) return plan;

    const double clearance = kBlobClearancePx * resolution_m;
    std::vector<Rect> keep_out;
    keep_out.reserve(scene.size());
    for (const Feature& f : scene.features) keep_out.push_back(bounding_box(f.geometry).expanded(clearance));
    const SpatialIndex buildings(keep_out);

    const std::size_t max_attempts = 10000 + 1000 * noise.n_spurious;
    std::size_t attempts = 0;
    while (plan.blobs.size() < noise.n_spurious) {
        if (++attempts > max_attempts) {
            throw ConfigError("could not place " + std::to_string(noise.n_spurious) +
                              " spurious blobs clear of the scene; placed " + std::to_string(plan.blobs.size()));
        }
        const double w = rng.between(noise.blob_size_min_px, noise.blob_size_max_px) * resolution_m;
        const double h = rng.between(noise.blob_size_min_px, noise.blob_size_max_px) * resolution_m;
        const double x_hi = extent.max_x - resolution_m - w;
        const double y_hi = extent.max_y - resolution_m - h;
        if (x_hi <= extent.min_x + resolution_m || y_hi <= extent.min_y + resolution_m) {
            throw ConfigError("extent is too small to hold spurious blobs");
        }
        const double x = rng.uniform(extent.min_x + resolution_m, x_hi);
        const double y = rng.uniform(extent.min_y + resolution_m, y_hi);
        const Rect blob{x, y, x + w, y + h};
        if (!buildings.query(blob).empty()) continue;
        const Rect reach = blob.expanded(clearance);
        if (std::any_of(plan.blobs.begin(), plan.blobs.end(), [&](const Rect& b) { return b.intersects(reach); })) {
            continue;
        }
        plan.blobs.push_back(blob);
    }
    return plan;
}

namespace {

struct OracleState {
    std::vector<Polygon> buildings;
    std::vector<Rect> boxes;
    std::vector<bool> omitted;
    std::vector<const SplitLine*> split_of;
    NoisePlan plan;
    double resolution_m = 1.0;
    std::unique_ptr<SpatialIndex> index;
};

void erase_band(BinaryMask& mask, const Rect& box, const SplitLine& split, double band) {
    const double lo = split.position - 0.5 * band;
    const double hi = split.position + 0.5 * band;
    const Rect area = box.expanded(mask.resolution_m());
    const double res = mask.resolution_m();
    const Coordinate o = mask.origin();
    const int c0 = std::clamp(static_cast<int>(std::floor((area.min_x - o.x) / res)), 0, mask.width());
    const int c1 = std::clamp(static_cast<int>(std::ceil((area.max_x - o.x) / res)), 0, mask.width());
    const int r0 = std::clamp(static_cast<int>(std::floor((area.min_y - o.y) / res)), 0, mask.height());
    const int r1 = std::clamp(static_cast<int>(std::ceil((area.max_y - o.y) / res)), 0, mask.height());
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            const Coordinate p = mask.pixel_center(c, r);
            if (!area.contains(p)) continue;
            const double v = split.vertical ? p.x : p.y;
            if (v >= lo && v < hi) mask.set(c, r, false);
        }
    }
}

}  // namespace

Segmenter oracle_segmenter(const FeatureSet& scene, const NoiseSpec& noise, const Rect& extent,
                           double resolution_m) {
    auto state = std::make_shared<OracleState>();
    state->plan = plan_noise(scene, noise, extent, resolution_m);
    state->resolution_m = resolution_m;
    for (const Feature& f : scene.features) {
        state->buildings.push_back(f.geometry);
        state->boxes.push_back(bounding_box(f.geometry));
    }
    state->omitted.assign(scene.size(), false);
    for (std::size_t i : state->plan.omitted) state->omitted[i] = true;
    state->split_of.assign(scene.size(), nullptr);
    for (const SplitLine& s : state->plan.splits) state->split_of[s.building] = &s;
    state->index = std::make_unique<SpatialIndex>(state->boxes);

    return [state](const Rect& window, int width_px, int height_px) {
        BinaryMask mask(width_px, height_px, {window.min_x, window.min_y}, window.width() / width_px);
        for (std::size_t i : state->index->query(window)) {
            if (state->omitted[i]) continue;
            rasterize(state->buildings[i], mask);
            if (const SplitLine* split = state->split_of[i]) {
                erase_band(mask, state->boxes[i], *split, state->resolution_m);
            }
        }
        for (const Rect& blob : state->plan.blobs) {
            if (blob.intersects(window)) rasterize(rectangle(blob), mask);
        }
        return mask;
    };
}

}  // namespace footeval
