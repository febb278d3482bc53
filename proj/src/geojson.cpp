#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "footeval/error.hpp"
#include "footeval/ingest.hpp"

namespace footeval {

using nlohmann::json;

std::string_view to_string(Source s) { return s == Source::prediction ? "prediction" : "ground_truth"; }

namespace {

void line_and_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

struct Reader {
    bool planar = false;
    std::string feature_id;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("feature '" + feature_id + "': " + what);
    }

    Coordinate position(const json& p) const {
        if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
            fail("position must be an array of at least two numbers");
        }
        const double a = p[0].get<double>();
        const double b = p[1].get<double>();
        if (planar) return {a, b};
        try {
            return project_lonlat(a, b);
        } catch (const ValidationError& e) {
            throw ValidationError("feature '" + feature_id + "': " + e.what());
        }
    }

    Ring ring(const json& r) const {
        if (!r.is_array()) fail("linear ring must be an array of positions");
        std::vector<Coordinate> v;
        v.reserve(r.size());
        for (const json& p : r) v.push_back(position(p));
        if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
        try {
            return Ring(std::move(v));
        } catch (const ValidationError& e) {
            throw ValidationError("feature '" + feature_id + "': " + e.what());
        }
    }

    Polygon polygon(const json& rings) const {
        if (!rings.is_array() || rings.empty()) fail("polygon needs at least one linear ring");
        Ring outer = ring(rings[0]);
        std::vector<Ring> holes;
        for (std::size_t i = 1; i < rings.size(); ++i) holes.push_back(ring(rings[i]));
        try {
            return Polygon(std::move(outer), std::move(holes));
        } catch (const ValidationError& e) {
            throw ValidationError("feature '" + feature_id + "': " + e.what());
        }
    }
};

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

FeatureSet parse_geojson(std::string_view text, Source source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 0, column = 0;
        line_and_column(text, e.byte == 0 ? 0 : e.byte - 1, line, column);
        throw ParseError(std::string("malformed GeoJSON: ") + e.what(), line, column);
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw ParseError("GeoJSON root must be a FeatureCollection");
    }
    const auto features = doc.find("features");
    if (features == doc.end() || !features->is_array()) {
        throw ParseError("FeatureCollection has no 'features' array");
    }

    FeatureSet out;
    out.source = source;
    Reader reader;
    const auto note = doc.find("crs_note");
    reader.planar = note != doc.end() && note->is_string() && note->get<std::string>() == kPlanarCrsNote;
    out.crs_note = reader.planar ? std::string(kPlanarCrsNote) : std::string(kMercatorCrsNote);

    if (const auto params = doc.find("run_parameters"); params != doc.end() && params->is_object()) {
        for (const auto& [k, v] : params->items()) out.metadata[k] = scalar_text(v);
    }
    if (const auto bbox = doc.find("bbox"); bbox != doc.end()) {
        if (!bbox->is_array() || bbox->size() != 4) throw ParseError("'bbox' must hold four numbers");
        reader.feature_id = "bbox";
        const Coordinate lo = reader.position(json::array({(*bbox)[0], (*bbox)[1]}));
        const Coordinate hi = reader.position(json::array({(*bbox)[2], (*bbox)[3]}));
        out.extent = Rect{lo.x, lo.y, hi.x, hi.y};
        if (!out.extent->valid()) throw ParseError("'bbox' minimum exceeds maximum");
    }

    std::set<std::string> seen;
    auto add = [&](std::string id, Polygon geometry, const std::map<std::string, std::string>& tags) {
        if (!seen.insert(id).second) throw ValidationError("duplicate feature id '" + id + "'");
        out.features.push_back(Feature{std::move(id), std::move(geometry), source, tags});
    };

    std::size_t index = 0;
    for (const json& f : *features) {
        const std::size_t position = index++;
        if (!f.is_object() || f.value("type", "") != "Feature") {
            throw ParseError("features[" + std::to_string(position) + "] is not a Feature");
        }
        std::map<std::string, std::string> tags;
        if (const auto props = f.find("properties"); props != f.end() && props->is_object()) {
            for (const auto& [k, v] : props->items()) tags[k] = scalar_text(v);
        }
        std::string id;
        if (const auto fid = f.find("id"); fid != f.end() && (fid->is_string() || fid->is_number_integer())) {
            id = scalar_text(*fid);
        } else if (auto t = tags.find("id"); t != tags.end()) {
            id = t->second;
        } else {
            id = "feature-" + std::to_string(position);
        }
        reader.feature_id = id;

        const auto geometry = f.find("geometry");
        if (geometry == f.end() || !geometry->is_object()) {
            ++out.diagnostics.skipped_geometries;
            out.diagnostics.warnings.push_back("feature '" + id + "' has no geometry");
            continue;
        }
        const std::string type = geometry->value("type", "");
        const auto coords = geometry->find("coordinates");
        if (type == "Polygon") {
            if (coords == geometry->end()) reader.fail("Polygon without coordinates");
            add(id, reader.polygon(*coords), tags);
        } else if (type == "MultiPolygon") {
            if (coords == geometry->end() || !coords->is_array()) reader.fail("MultiPolygon without coordinates");
            for (std::size_t k = 0; k < coords->size(); ++k) {
                reader.feature_id = id + "/" + std::to_string(k);
                add(reader.feature_id, reader.polygon((*coords)[k]), tags);
            }
        } else {
            ++out.diagnostics.skipped_geometries;
            out.diagnostics.warnings.push_back("feature '" + id + "' has non-polygonal geometry '" + type + "'");
        }
    }
    return out;
}

FeatureSet read_feature_file(const std::filesystem::path& path, Source source) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = std::find_if(text.begin(), text.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    try {
        if (first != text.end() && *first == '<') return parse_osm_xml(text, source);
        return parse_geojson(text, source);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace footeval
