#pragma once

#include <map>
#include <string>

#include "footeval/error.hpp"
#include "footeval/ingest.hpp"
#include "footeval/match.hpp"

namespace footeval {

/// A ratio whose denominator is zero. Carries the counts it was asked about.
class UndefinedMetricError : public Error {
public:
    UndefinedMetricError(const std::string& metric, const Counts& counts);

    const std::string& metric() const { return metric_; }
    const Counts& counts() const { return counts_; }

private:
    std::string metric_;
    Counts counts_;
};

/// tp / (tp + fp). Throws UndefinedMetricError when tp + fp = 0.
double precision(const Counts& c);
/// tp / (tp + fn). Throws UndefinedMetricError when tp + fn = 0.
double recall(const Counts& c);
/// Harmonic mean of precision and recall; 0 when both are 0.
double f1(const Counts& c);

/// Ordered key/value snapshot of the parameters that produced a report.
using ConfigEcho = std::map<std::string, std::string>;

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Counts counts;
    ConfigEcho config_echo;
};

MetricsReport report_from_counts(const Counts& counts, ConfigEcho config_echo = {});

/// match_features followed by the three ratios.
MetricsReport evaluate(const FeatureSet& pred, const FeatureSet& gt, const MatchCriterion& criterion,
                       ConfigEcho config_echo = {});

}  // namespace footeval
