#include "footeval/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace footeval {

using nlohmann::json;

std::string format_percent(double ratio) {
    // The small bias keeps values such as 0.84505 (stored as 0.8450499...) rounding up.
    const auto hundredths = static_cast<long long>(std::floor(ratio * 10000.0 + 0.5 + 1e-9));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", hundredths / 100, hundredths % 100);
    return buf;
}

namespace {

json ring_json(const Ring& r, CoordinateOutput coords) {
    json ring = json::array();
    auto push = [&](const Coordinate& c) {
        if (coords == CoordinateOutput::lonlat) {
            const LonLat ll = unproject(c);
            ring.push_back({ll.lon, ll.lat});
        } else {
            ring.push_back({c.x, c.y});
        }
    };
    for (const Coordinate& c : r.vertices()) push(c);
    push(r[0]);
    return ring;
}

json feature_json(const std::string& id, const Polygon& p, const std::map<std::string, std::string>& properties,
                  CoordinateOutput coords) {
    json rings = json::array();
    for (const Ring* r : p.rings()) rings.push_back(ring_json(*r, coords));
    return {{"type", "Feature"},
            {"id", id},
            {"properties", properties},
            {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}}};
}

std::string collection(const std::vector<json>& features, const std::vector<std::pair<std::string, json>>& members) {
    std::string out = "{\n\"type\": \"FeatureCollection\",\n";
    for (const auto& [k, v] : members) out += json(k).dump() + ": " + v.dump() + ",\n";
    out += "\"features\": [";
    for (std::size_t i = 0; i < features.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        out += features[i].dump();
    }
    out += features.empty() ? "]\n}\n" : "\n]\n}\n";
    return out;
}

std::string plural(std::size_t n) { return std::to_string(n) + (n == 1 ? " building" : " buildings"); }

}  // namespace

std::string emit_geojson(const FeatureSet& fs, const Settings& run_parameters, CoordinateOutput coords) {
    std::vector<std::pair<std::string, json>> members;
    if (coords == CoordinateOutput::planar) members.emplace_back("crs_note", kPlanarCrsNote);
    if (fs.extent) {
        if (coords == CoordinateOutput::lonlat) {
            const LonLat lo = unproject({fs.extent->min_x, fs.extent->min_y});
            const LonLat hi = unproject({fs.extent->max_x, fs.extent->max_y});
            members.emplace_back("bbox", json::array({lo.lon, lo.lat, hi.lon, hi.lat}));
        } else {
            members.emplace_back("bbox", json::array({fs.extent->min_x, fs.extent->min_y, fs.extent->max_x,
                                                      fs.extent->max_y}));
        }
    }
    if (!run_parameters.empty()) members.emplace_back("run_parameters", run_parameters);

    std::vector<json> features;
    features.reserve(fs.size());
    for (const Feature& f : fs.features) features.push_back(feature_json(f.id, f.geometry, f.tags, coords));
    return collection(features, members);
}

std::string emit_overlays(const FeatureSet& pred, const FeatureSet& gt, const MatchOutcome& outcome,
                          CoordinateOutput coords) {
    std::vector<json> features;
    features.reserve(pred.size() + gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) {
        auto props = gt.features[i].tags;
        props["layer"] = "ground_truth";
        props["status"] = outcome.gt_status[i] == GroundTruthStatus::detected ? "tp-detected" : "fn-missed";
        features.push_back(feature_json("gt:" + gt.features[i].id, gt.features[i].geometry, props, coords));
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        auto props = pred.features[i].tags;
        props["layer"] = "prediction";
        props["status"] = outcome.pred_status[i] == PredictionStatus::matched ? "matched" : "fp-spurious";
        features.push_back(feature_json("pred:" + pred.features[i].id, pred.features[i].geometry, props, coords));
    }
    std::vector<std::pair<std::string, json>> members;
    if (coords == CoordinateOutput::planar) members.emplace_back("crs_note", kPlanarCrsNote);
    return collection(features, members);
}

std::string emit_osm_xml(const FeatureSet& fs) {
    std::string nodes, ways;
    char buf[160];
    long long node_id = 0;
    long long way_id = 0;
    for (const Feature& f : fs.features) {
        std::snprintf(buf, sizeof buf, "  <way id=\"%lld\">\n", ++way_id);
        ways += buf;
        const long long first = node_id + 1;
        for (const Coordinate& c : f.geometry.outer().vertices()) {
            const LonLat ll = unproject(c);
            std::snprintf(buf, sizeof buf, "  <node id=\"%lld\" lat=\"%.12f\" lon=\"%.12f\"/>\n", ++node_id, ll.lat,
                          ll.lon);
            nodes += buf;
            std::snprintf(buf, sizeof buf, "    <nd ref=\"%lld\"/>\n", node_id);
            ways += buf;
        }
        std::snprintf(buf, sizeof buf, "    <nd ref=\"%lld\"/>\n", first);
        ways += buf;
        auto tags = f.tags;
        tags.emplace("building", "yes");
        tags["ref"] = f.id;
        for (const auto& [k, v] : tags) {
            std::string escaped;
            for (char ch : v) {
                switch (ch) {
                    case '&': escaped += "&amp;"; break;
                    case '<': escaped += "&lt;"; break;
                    case '"': escaped += "&quot;"; break;
                    default: escaped += ch;
                }
            }
            ways += "    <tag k=\"" + k + "\" v=\"" + escaped + "\"/>\n";
        }
        ways += "  </way>\n";
    }
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\" generator=\"footeval\">\n" + nodes +
           ways + "</osm>\n";
}

std::string report_json(const MetricsReport& r) {
    const Counts& c = r.counts;
    json doc = {{"counts",
                 {{"tp", c.tp},
                  {"fp", c.fp},
                  {"fn", c.fn_},
                  {"n_gt", c.n_gt},
                  {"n_pred", c.n_pred},
                  {"n_gt_matched", c.n_gt_matched},
                  {"n_pred_matched", c.n_pred_matched}}},
                {"precision", r.precision},
                {"recall", r.recall},
                {"f1", r.f1},
                {"config_echo", r.config_echo},
                {"tool_version", kToolVersion}};
    return doc.dump(2) + "\n";
}

std::string report_text(const MetricsReport& r) {
    const Counts& c = r.counts;
    std::string out;
    char buf[160];
    auto row = [&](const char* label, const std::string& value) {
        std::snprintf(buf, sizeof buf, "%-38s %s\n", label, value.c_str());
        out += buf;
    };
    row("Ground-truth buildings", plural(c.n_gt));
    row("Predicted buildings", plural(c.n_pred));
    row("Ground-truth buildings detected", plural(c.n_gt_matched));
    row("Predictions matched to ground truth", plural(c.n_pred_matched));
    out += "\n";
    row("True Positive", plural(c.tp));
    row("False Positive", plural(c.fp));
    row("False Negative", plural(c.fn_));
    row("Precision", format_percent(r.precision) + " %");
    row("Recall", format_percent(r.recall) + " %");
    row("F1-score", format_percent(r.f1) + " %");
    if (!r.config_echo.empty()) {
        out += "\n";
        for (const auto& [k, v] : r.config_echo) out += "# " + k + " = " + v + "\n";
    }
    return out;
}

}  // namespace footeval
