#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "footeval/geometry.hpp"
#include "footeval/match.hpp"
#include "footeval/tiling.hpp"

namespace footeval {

/// Flat `key = value` settings. Keys sort lexicographically, which keeps emitted manifests stable.
using Settings = std::map<std::string, std::string>;

/// One `key = value` per line; `#` starts a comment; blank lines are ignored.
/// Throws ConfigError naming the line for malformed or duplicate entries.
Settings parse_settings(std::string_view text);
Settings read_settings_file(const std::filesystem::path& path);
std::string format_settings(const Settings& settings);

/// "minx,miny,maxx,maxy".
Rect parse_rect(const std::string& text);
std::string format_rect(const Rect& r);
/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

enum class Mode { evaluate, simulate, tally };

struct RunConfig {
    Mode mode = Mode::simulate;
    std::filesystem::path pred_path;
    std::filesystem::path gt_path;
    std::filesystem::path scene_path;
    std::filesystem::path out_dir;
    std::optional<Rect> boundary;
    std::optional<Rect> extent;
    TileConfig tile;
    MatchCriterion criterion = MatchCriterion::any_overlap();
    NoiseSpec noise;
    unsigned threads = 0;

    /// Keys accepted by apply(), in the order they are documented.
    static const std::vector<std::string>& keys();

    /// Overwrites the fields named in `settings`. Throws ConfigError on unknown keys or bad values.
    void apply(const Settings& settings);
    /// Throws ConfigError when a field is out of range or a path required by `mode` is missing.
    void validate() const;
    /// Every parameter that shapes a simulation, as settings.
    Settings simulation_echo() const;
};

}  // namespace footeval
