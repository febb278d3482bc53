#include "footeval/metrics.hpp"

namespace footeval {

namespace {

std::string describe(const Counts& c) {
    return "tp=" + std::to_string(c.tp) + ", fp=" + std::to_string(c.fp) + ", fn=" + std::to_string(c.fn_);
}

}  // namespace

UndefinedMetricError::UndefinedMetricError(const std::string& metric, const Counts& counts)
    : Error(metric + " is undefined for " + describe(counts)), metric_(metric), counts_(counts) {}

double precision(const Counts& c) {
    if (c.tp + c.fp == 0) throw UndefinedMetricError("precision", c);
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const Counts& c) {
    if (c.tp + c.fn_ == 0) throw UndefinedMetricError("recall", c);
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn_);
}

double f1(const Counts& c) {
    const double p = precision(c);
    const double r = recall(c);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

MetricsReport report_from_counts(const Counts& counts, ConfigEcho config_echo) {
    MetricsReport r;
    r.counts = counts;
    r.precision = precision(counts);
    r.recall = recall(counts);
    r.f1 = f1(counts);
    r.config_echo = std::move(config_echo);
    return r;
}

MetricsReport evaluate(const FeatureSet& pred, const FeatureSet& gt, const MatchCriterion& criterion,
                       ConfigEcho config_echo) {
    config_echo.emplace("criterion", criterion.to_string());
    return report_from_counts(match_features(pred, gt, criterion).counts, std::move(config_echo));
}

}  // namespace footeval
