#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "footeval/geometry.hpp"
#include "footeval/ingest.hpp"

namespace footeval {

/// When a prediction and a ground-truth footprint count as the same building.
class MatchCriterion {
public:
    enum class Kind { any_overlap, iou_threshold };

    /// Positive intersection area above `epsilon_area`.
    static MatchCriterion any_overlap(double epsilon_area = kOverlapEpsilon);
    /// IoU ≥ tau, tau in (0, 1].
    static MatchCriterion iou_threshold(double tau);
    /// Parses "any-overlap" or "iou:<tau>".
    static MatchCriterion parse(const std::string& text);

    Kind kind() const { return kind_; }
    double tau() const { return tau_; }
    double epsilon_area() const { return epsilon_area_; }
    std::string to_string() const;

    bool accepts(const Polygon& pred, const Polygon& gt) const;

private:
    MatchCriterion(Kind kind, double tau, double epsilon_area) : kind_(kind), tau_(tau), epsilon_area_(epsilon_area) {}

    Kind kind_;
    double tau_;
    double epsilon_area_;
};

/// Detection tallies. TP counts detected ground-truth buildings; FP counts predictions
/// that matched nothing. The two sides are counted independently.
struct Counts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn_ = 0;
    std::size_t n_gt = 0;
    std::size_t n_pred = 0;
    std::size_t n_gt_matched = 0;
    std::size_t n_pred_matched = 0;

    friend bool operator==(const Counts&, const Counts&) = default;
};

/// Throws ValidationError when a matched count exceeds its total.
Counts tally_counts(std::size_t n_gt, std::size_t n_pred, std::size_t n_gt_matched, std::size_t n_pred_matched);

enum class GroundTruthStatus { detected, missed };
enum class PredictionStatus { matched, spurious };

struct MatchPair {
    std::string pred_id;
    std::string gt_id;

    friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

struct MatchOutcome {
    Counts counts;
    /// Parallel to the ground-truth / prediction feature order of the inputs.
    std::vector<GroundTruthStatus> gt_status;
    std::vector<PredictionStatus> pred_status;
    /// Every pair satisfying the criterion, sorted by (pred id, gt id).
    std::vector<MatchPair> pairs;
};

/// Uniform-grid index over bounding boxes. Cell size defaults to the median box diagonal.
class SpatialIndex {
public:
    explicit SpatialIndex(std::vector<Rect> boxes, double cell_size = 0.0);

    /// Indices (ascending) of every box intersecting `query`.
    std::vector<std::size_t> query(const Rect& query) const;

    std::size_t size() const { return boxes_.size(); }
    double cell_size() const { return cell_; }

private:
    std::pair<long, long> cell_of(double x, double y) const;

    std::vector<Rect> boxes_;
    Rect bounds_{};
    double cell_ = 1.0;
    long cols_ = 0;
    long rows_ = 0;
    std::vector<std::vector<std::size_t>> cells_;
};

SpatialIndex build_spatial_index(const FeatureSet& fs);

struct MatchOptions {
    /// Worker threads for candidate checks; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Throws UsageError unless `pred` holds predictions and `gt` ground truth.
MatchOutcome match_features(const FeatureSet& pred, const FeatureSet& gt, const MatchCriterion& criterion,
                            const MatchOptions& options = {});

}  // namespace footeval
