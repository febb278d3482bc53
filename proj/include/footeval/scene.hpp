#pragma once

#include <cstdint>
#include <utility>

#include "footeval/ingest.hpp"
#include "footeval/tiling.hpp"

namespace footeval {

/// Projected south-west corner used for generated scenes (a West Lafayette, IN neighbourhood).
Coordinate default_scene_origin();

/// Detached rectangular houses, one per 60 m lot on a near-square grid. House sides are
/// 10 to 20 m, so neighbours are at least 30 m apart and every lot keeps open ground for
/// spurious detections. `extent` is set to the lot grid.
FeatureSet make_residential_scene(std::size_t buildings, std::uint64_t seed, Coordinate origin = default_scene_origin());

/// Scene laid out against the tile grid of `cfg` at 0% overlap over a 3×3-tile extent:
/// eight houses cross exactly one tile seam, one sits on a seam crossing, and
/// `interior` houses lie wholly inside a tile. All edges fall on the pixel lattice.
struct StraddleScene {
    FeatureSet scene;
    std::size_t single_seam = 0;
    std::size_t seam_crossing = 0;
    std::size_t interior = 0;
};
StraddleScene make_straddle_scene(const TileConfig& cfg, Coordinate origin = default_scene_origin());

/// Prediction/ground-truth pair whose overlap matching yields exactly the given totals.
/// Detected buildings receive one or more prediction strips (split segments); unmatched
/// predictions sit in a separate row away from every building.
/// Throws ValidationError when the four numbers cannot describe a matching.
std::pair<FeatureSet, FeatureSet> make_count_fixture(std::size_t n_gt, std::size_t n_pred, std::size_t n_gt_matched,
                                                     std::size_t n_pred_matched);

}  // namespace footeval
