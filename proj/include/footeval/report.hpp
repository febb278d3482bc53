#pragma once

#include <string>
#include <string_view>

#include "footeval/config.hpp"
#include "footeval/ingest.hpp"
#include "footeval/match.hpp"
#include "footeval/metrics.hpp"

namespace footeval {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Ratio as a percentage rounded half-up to two decimals, e.g. 0.733333 → "73.33".
std::string format_percent(double ratio);

enum class CoordinateOutput { planar, lonlat };

/// FeatureCollection with string ids and tags as properties. Planar output declares
/// `"crs_note": "planar-meters"`; `extent` becomes the `bbox` member and
/// `run_parameters` a foreign member of the same name.
std::string emit_geojson(const FeatureSet& fs, const Settings& run_parameters = {},
                         CoordinateOutput coords = CoordinateOutput::planar);

/// Every prediction and ground-truth feature with a `status` property: `tp-detected` /
/// `fn-missed` on ground truth, `matched` / `fp-spurious` on predictions. Ids are prefixed
/// `gt:` and `pred:` and a `layer` property names the source.
std::string emit_overlays(const FeatureSet& pred, const FeatureSet& gt, const MatchOutcome& outcome,
                          CoordinateOutput coords);

/// OSM XML with one node per vertex and one closed `building` way per feature.
std::string emit_osm_xml(const FeatureSet& fs);

std::string report_json(const MetricsReport& report);
/// Two blocks: the building totals, then TP / FP / FN / Precision / Recall / F1-score.
std::string report_text(const MetricsReport& report);

}  // namespace footeval
