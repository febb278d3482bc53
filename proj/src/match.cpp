#include <algorithm>
#include <cstdlib>

#include "detail/parallel.hpp"
#include "footeval/error.hpp"
#include "footeval/match.hpp"

namespace footeval {

MatchCriterion MatchCriterion::any_overlap(double epsilon_area) {
    if (!(epsilon_area >= 0.0)) throw ValidationError("overlap epsilon must be non-negative");
    return MatchCriterion(Kind::any_overlap, 0.0, epsilon_area);
}

MatchCriterion MatchCriterion::iou_threshold(double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("IoU threshold must lie in (0, 1]");
    return MatchCriterion(Kind::iou_threshold, tau, kOverlapEpsilon);
}

MatchCriterion MatchCriterion::parse(const std::string& text) {
    if (text == "any-overlap") return any_overlap();
    if (text.rfind("iou:", 0) == 0) {
        const std::string number = text.substr(4);
        char* end = nullptr;
        const double tau = std::strtod(number.c_str(), &end);
        if (!number.empty() && *end == '\0') return iou_threshold(tau);
    }
    throw ValidationError("criterion must be 'any-overlap' or 'iou:<tau>', got '" + text + "'");
}

std::string MatchCriterion::to_string() const {
    if (kind_ == Kind::any_overlap) return "any-overlap";
    std::string t = std::to_string(tau_);
    t.erase(t.find_last_not_of('0') + 1);
    if (t.back() == '.') t.pop_back();
    return "iou:" + t;
}

bool MatchCriterion::accepts(const Polygon& pred, const Polygon& gt) const {
    const double inter = intersection_area(pred, gt);
    if (!(inter > epsilon_area_)) return false;
    if (kind_ == Kind::any_overlap) return true;
    return inter / (polygon_area(pred) + polygon_area(gt) - inter) >= tau_;
}

Counts tally_counts(std::size_t n_gt, std::size_t n_pred, std::size_t n_gt_matched, std::size_t n_pred_matched) {
    if (n_gt_matched > n_gt) {
        throw ValidationError("matched ground-truth count " + std::to_string(n_gt_matched) + " exceeds total " +
                              std::to_string(n_gt));
    }
    if (n_pred_matched > n_pred) {
        throw ValidationError("matched prediction count " + std::to_string(n_pred_matched) + " exceeds total " +
                              std::to_string(n_pred));
    }
    Counts c;
    c.n_gt = n_gt;
    c.n_pred = n_pred;
    c.n_gt_matched = n_gt_matched;
    c.n_pred_matched = n_pred_matched;
    c.tp = n_gt_matched;
    c.fn_ = n_gt - n_gt_matched;
    c.fp = n_pred - n_pred_matched;
    return c;
}

MatchOutcome match_features(const FeatureSet& pred, const FeatureSet& gt, const MatchCriterion& criterion,
                            const MatchOptions& options) {
    for (const Feature& f : pred.features) {
        if (pred.source != Source::prediction || f.source != Source::prediction) {
            throw UsageError("prediction set contains non-prediction feature '" + f.id + "'");
        }
    }
    for (const Feature& f : gt.features) {
        if (gt.source != Source::ground_truth || f.source != Source::ground_truth) {
            throw UsageError("ground-truth set contains non-ground-truth feature '" + f.id + "'");
        }
    }
    if (pred.source != Source::prediction || gt.source != Source::ground_truth) {
        throw UsageError("match_features expects (prediction, ground_truth) feature sets");
    }

    const SpatialIndex index = build_spatial_index(pred);
    std::vector<std::vector<std::size_t>> hits(gt.size());
    detail::parallel_for(gt.size(), options.threads, [&](std::size_t g) {
        const Polygon& target = gt.features[g].geometry;
        for (std::size_t p : index.query(bounding_box(target))) {
            if (criterion.accepts(pred.features[p].geometry, target)) hits[g].push_back(p);
        }
    });

    MatchOutcome out;
    out.gt_status.assign(gt.size(), GroundTruthStatus::missed);
    out.pred_status.assign(pred.size(), PredictionStatus::spurious);
    std::size_t gt_matched = 0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
        if (!hits[g].empty()) {
            out.gt_status[g] = GroundTruthStatus::detected;
            ++gt_matched;
        }
        for (std::size_t p : hits[g]) {
            out.pred_status[p] = PredictionStatus::matched;
            out.pairs.push_back({pred.features[p].id, gt.features[g].id});
        }
    }
    const auto pred_matched = static_cast<std::size_t>(
        std::count(out.pred_status.begin(), out.pred_status.end(), PredictionStatus::matched));
    std::sort(out.pairs.begin(), out.pairs.end());
    out.counts = tally_counts(gt.size(), pred.size(), gt_matched, pred_matched);
    return out;
}

}  // namespace footeval
