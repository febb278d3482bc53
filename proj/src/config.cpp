#include "footeval/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "footeval/error.hpp"

namespace footeval {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& v, long long lo, long long hi) {
    long long out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
    if (out < lo || out > hi) {
        throw ConfigError(key + ": " + v + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size()) {
        throw ConfigError(key + ": '" + v + "' is not a non-negative integer");
    }
    return out;
}

}  // namespace

Settings parse_settings(std::string_view text) {
    Settings out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_settings(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string format_settings(const Settings& settings) {
    std::string out;
    for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
    return out;
}

std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

Rect parse_rect(const std::string& text) {
    std::vector<double> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        parts.push_back(to_double("rectangle", trim(std::string_view(text).substr(pos, comma - pos))));
        pos = comma + 1;
    }
    if (parts.size() != 4) throw ConfigError("rectangle needs four comma-separated numbers: minx,miny,maxx,maxy");
    const Rect r{parts[0], parts[1], parts[2], parts[3]};
    if (!r.valid()) throw ConfigError("rectangle minimum exceeds maximum");
    return r;
}

std::string format_rect(const Rect& r) {
    return format_number(r.min_x) + "," + format_number(r.min_y) + "," + format_number(r.max_x) + "," +
           format_number(r.max_y);
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k{
        "resolution_cm_per_px", "tile_size_px", "overlap_percent", "min_segment_area_m2", "n_spurious",
        "n_split",              "n_omit",       "blob_size_px",    "seed",                "extent",
        "boundary",             "criterion",    "threads",         "scene",               "pred",
        "gt",                   "out"};
    return k;
}

void RunConfig::apply(const Settings& settings) {
    constexpr long long kMaxInt = std::numeric_limits<int>::max();
    for (const auto& [key, value] : settings) {
        if (key == "resolution_cm_per_px") {
            tile.resolution_cm_per_px = to_double(key, value);
        } else if (key == "tile_size_px") {
            tile.tile_size_px = static_cast<int>(to_integer(key, value, 1, kMaxInt));
        } else if (key == "overlap_percent") {
            tile.overlap_percent = static_cast<int>(to_integer(key, value, 0, 99));
        } else if (key == "min_segment_area_m2") {
            tile.min_segment_area_m2 = to_double(key, value);
        } else if (key == "n_spurious") {
            noise.n_spurious = to_unsigned(key, value);
        } else if (key == "n_split") {
            noise.n_split = to_unsigned(key, value);
        } else if (key == "n_omit") {
            noise.n_omit = to_unsigned(key, value);
        } else if (key == "blob_size_px") {
            const auto comma = value.find(',');
            if (comma == std::string::npos) {
                noise.blob_size_min_px = noise.blob_size_max_px = static_cast<int>(to_integer(key, value, 1, kMaxInt));
            } else {
                noise.blob_size_min_px = static_cast<int>(to_integer(key, trim(value.substr(0, comma)), 1, kMaxInt));
                noise.blob_size_max_px = static_cast<int>(to_integer(key, trim(value.substr(comma + 1)), 1, kMaxInt));
            }
        } else if (key == "seed") {
            noise.seed = to_unsigned(key, value);
        } else if (key == "extent") {
            extent = parse_rect(value);
        } else if (key == "boundary") {
            boundary = parse_rect(value);
        } else if (key == "criterion") {
            try {
                criterion = MatchCriterion::parse(value);
            } catch (const ValidationError& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "threads") {
            threads = static_cast<unsigned>(to_integer(key, value, 0, 1024));
        } else if (key == "scene") {
            scene_path = value;
        } else if (key == "pred") {
            pred_path = value;
        } else if (key == "gt") {
            gt_path = value;
        } else if (key == "out") {
            out_dir = value;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
}

void RunConfig::validate() const {
    if (mode == Mode::simulate) {
        tile.validate();
        if (noise.blob_size_min_px < 1 || noise.blob_size_max_px < noise.blob_size_min_px) {
            throw ConfigError("blob_size_px must be 'min,max' with 1 <= min <= max");
        }
        if (scene_path.empty()) throw ConfigError("simulate needs a scene file");
        if (out_dir.empty()) throw ConfigError("simulate needs an output directory");
        if (extent && !(extent->width() > 0.0 && extent->height() > 0.0)) {
            throw ConfigError("extent must have positive width and height");
        }
    } else if (mode == Mode::evaluate) {
        if (pred_path.empty() || gt_path.empty()) throw ConfigError("evaluate needs prediction and ground-truth files");
        if (out_dir.empty()) throw ConfigError("evaluate needs an output directory");
    }
}

Settings RunConfig::simulation_echo() const {
    Settings s;
    s["resolution_cm_per_px"] = format_number(tile.resolution_cm_per_px);
    s["tile_size_px"] = std::to_string(tile.tile_size_px);
    s["overlap_percent"] = std::to_string(tile.overlap_percent);
    s["min_segment_area_m2"] = format_number(tile.min_segment_area_m2);
    s["n_spurious"] = std::to_string(noise.n_spurious);
    s["n_split"] = std::to_string(noise.n_split);
    s["n_omit"] = std::to_string(noise.n_omit);
    s["blob_size_px"] = std::to_string(noise.blob_size_min_px) + "," + std::to_string(noise.blob_size_max_px);
    s["seed"] = std::to_string(noise.seed);
    if (extent) s["extent"] = format_rect(*extent);
    return s;
}

}  // namespace footeval
