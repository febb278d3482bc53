#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "footeval/config.hpp"

namespace footeval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitUndefinedMetric = 3;

/// Full command line including the program name in args[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes report.json, report.txt and overlays.geojson into config.out_dir. Nothing is
/// written unless every input parses and every metric is defined.
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs the tiling pipeline over the scene and writes predictions.geojson and manifest.txt.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Counts and metrics from n_gt, n_pred, n_gt_matched, n_pred_matched.
int cmd_tally(const std::array<std::string, 4>& numbers, std::ostream& out, std::ostream& err);

}  // namespace footeval
