#include "footeval/scene.hpp"

#include <cmath>

#include "detail/rng.hpp"
#include "footeval/error.hpp"

namespace footeval {

namespace {

constexpr double kLotSize = 60.0;

Feature house(std::string id, const Rect& r, Source source = Source::ground_truth) {
    return Feature{std::move(id), rectangle(r), source, {{"building", "house"}}};
}

std::string numbered(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
    return buf;
}

}  // namespace

Coordinate default_scene_origin() { return project_lonlat(-86.9205, 40.4338); }

FeatureSet make_residential_scene(std::size_t buildings, std::uint64_t seed, Coordinate origin) {
    FeatureSet fs;
    fs.source = Source::ground_truth;
    fs.crs_note = std::string(kPlanarCrsNote);
    if (buildings == 0) return fs;

    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(buildings) * 1.25)));
    const std::size_t rows = (buildings + cols - 1) / cols;
    detail::Rng rng(seed);
    for (std::size_t i = 0; i < buildings; ++i) {
        const double cx = origin.x + (static_cast<double>(i % cols) + 0.5) * kLotSize + rng.uniform(-5.0, 5.0);
        const double cy = origin.y + (static_cast<double>(i / cols) + 0.5) * kLotSize + rng.uniform(-5.0, 5.0);
        const double w = rng.uniform(10.0, 20.0);
        const double h = rng.uniform(10.0, 20.0);
        fs.features.push_back(house(numbered("bldg-", i + 1), {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2}));
    }
    fs.extent = Rect{origin.x, origin.y, origin.x + static_cast<double>(cols) * kLotSize,
                     origin.y + static_cast<double>(rows) * kLotSize};
    return fs;
}

StraddleScene make_straddle_scene(const TileConfig& cfg, Coordinate origin) {
    cfg.validate();
    if (cfg.tile_size_px < 64) throw ConfigError("straddle scene needs tiles of at least 64 px");
    const double res = cfg.resolution_m();
    const double tile = cfg.tile_size_px;
    constexpr double kHalf = 4.0;  // houses are 8×8 px

    StraddleScene out;
    FeatureSet& fs = out.scene;
    fs.source = Source::ground_truth;
    fs.crs_note = std::string(kPlanarCrsNote);
    std::size_t next = 1;
    auto add = [&](double cx_px, double cy_px) {
        const Rect r{origin.x + (cx_px - kHalf) * res, origin.y + (cy_px - kHalf) * res,
                     origin.x + (cx_px + kHalf) * res, origin.y + (cy_px + kHalf) * res};
        fs.features.push_back(house(numbered("house-", next++), r));
    };

    for (double seam : {tile, 2 * tile}) {
        for (double along : {0.5 * tile, 2.5 * tile}) {
            add(seam, along);
            add(along, seam);
            out.single_seam += 2;
        }
    }
    add(tile, tile);
    out.seam_crossing = 1;
    for (const auto& [cx, cy] : {std::pair{0.5, 0.5}, {1.5, 1.5}, {2.5, 2.5}, {0.5, 2.5}, {2.5, 0.5}}) {
        add(cx * tile, cy * tile);
        ++out.interior;
    }
    fs.extent = Rect{origin.x, origin.y, origin.x + 3 * tile * res, origin.y + 3 * tile * res};
    return out;
}

std::pair<FeatureSet, FeatureSet> make_count_fixture(std::size_t n_gt, std::size_t n_pred, std::size_t n_gt_matched,
                                                     std::size_t n_pred_matched) {
    if (n_gt_matched > n_gt || n_pred_matched > n_pred) throw ValidationError("matched count exceeds total");
    if (n_pred_matched < n_gt_matched) {
        throw ValidationError("every detected building needs at least one matching prediction");
    }
    if ((n_gt_matched == 0) != (n_pred_matched == 0)) {
        throw ValidationError("matched predictions require detected buildings and vice versa");
    }
    constexpr double kSide = 10.0;
    constexpr double kPitch = 30.0;
    constexpr std::size_t kPerRow = 25;

    FeatureSet pred, gt;
    pred.source = Source::prediction;
    gt.source = Source::ground_truth;
    pred.crs_note = gt.crs_note = std::string(kPlanarCrsNote);

    const std::size_t extra = n_pred_matched - n_gt_matched;
    std::size_t pred_id = 1;
    for (std::size_t i = 0; i < n_gt; ++i) {
        const double x = static_cast<double>(i % kPerRow) * kPitch;
        const double y = static_cast<double>(i / kPerRow) * kPitch;
        gt.features.push_back(house(numbered("gt-", i + 1), {x, y, x + kSide, y + kSide}));
        if (i >= n_gt_matched) continue;
        const std::size_t strips = 1 + extra / n_gt_matched + (i < extra % n_gt_matched ? 1 : 0);
        const double step = kSide / static_cast<double>(strips);
        for (std::size_t s = 0; s < strips; ++s) {
            const Rect r{x + static_cast<double>(s) * step, y, s + 1 == strips ? x + kSide : x + static_cast<double>(s + 1) * step,
                         y + kSide};
            pred.features.push_back(house(numbered("pred-", pred_id++), r, Source::prediction));
        }
    }
    // Spurious predictions live below the building grid.
    for (std::size_t k = 0; k < n_pred - n_pred_matched; ++k) {
        const double x = static_cast<double>(k % kPerRow) * kPitch;
        const double y = -kPitch - static_cast<double>(k / kPerRow) * kPitch;
        pred.features.push_back(house(numbered("pred-", pred_id++), {x, y, x + 6.0, y + 6.0}, Source::prediction));
    }
    return {std::move(pred), std::move(gt)};
}

}  // namespace footeval
