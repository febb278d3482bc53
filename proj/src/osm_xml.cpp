#include <cstdlib>
#include <memory>
#include <type_traits>
#include <set>
#include <unordered_map>

#include <expat.h>

#include "footeval/error.hpp"
#include "footeval/ingest.hpp"

namespace footeval {

namespace {

struct Way {
    std::string id;
    std::vector<long long> refs;
    std::map<std::string, std::string> tags;
};

struct Collector {
    std::unordered_map<long long, LonLat> nodes;
    std::vector<Way> ways;
    bool in_way = false;
    std::string error;
    XML_Parser parser = nullptr;

    const char* attribute(const char** attrs, std::string_view name) const {
        for (std::size_t i = 0; attrs[i]; i += 2) {
            if (name == attrs[i]) return attrs[i + 1];
        }
        return nullptr;
    }

    void fail(std::string what) {
        if (error.empty()) error = std::move(what);
        XML_StopParser(parser, XML_FALSE);
    }

    static bool to_integer(const char* s, long long& out) {
        if (!s || !*s) return false;
        char* end = nullptr;
        out = std::strtoll(s, &end, 10);
        return *end == '\0';
    }

    static bool to_double(const char* s, double& out) {
        if (!s || !*s) return false;
        char* end = nullptr;
        out = std::strtod(s, &end);
        return *end == '\0';
    }

    void start(std::string_view name, const char** attrs) {
        if (name == "node") {
            long long id = 0;
            LonLat ll;
            if (!to_integer(attribute(attrs, "id"), id) || !to_double(attribute(attrs, "lat"), ll.lat) ||
                !to_double(attribute(attrs, "lon"), ll.lon)) {
                return fail("<node> needs integer id and numeric lat/lon");
            }
            nodes[id] = ll;
        } else if (name == "way") {
            const char* id = attribute(attrs, "id");
            if (!id) return fail("<way> without id");
            ways.push_back(Way{id, {}, {}});
            in_way = true;
        } else if (name == "nd" && in_way) {
            long long ref = 0;
            if (!to_integer(attribute(attrs, "ref"), ref)) return fail("<nd> needs an integer ref");
            ways.back().refs.push_back(ref);
        } else if (name == "tag" && in_way) {
            const char* k = attribute(attrs, "k");
            const char* v = attribute(attrs, "v");
            if (!k || !v) return fail("<tag> needs k and v");
            ways.back().tags[k] = v;
        }
    }

    void end(std::string_view name) {
        if (name == "way") in_way = false;
    }
};

}  // namespace

FeatureSet parse_osm_xml(std::string_view text, Source source) {
    Collector c;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                        &XML_ParserFree);
    c.parser = parser.get();
    XML_SetUserData(c.parser, &c);
    XML_SetElementHandler(
        c.parser,
        [](void* data, const XML_Char* name, const XML_Char** attrs) { static_cast<Collector*>(data)->start(name, attrs); },
        [](void* data, const XML_Char* name) { static_cast<Collector*>(data)->end(name); });

    if (XML_Parse(c.parser, text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
        const std::size_t line = XML_GetCurrentLineNumber(c.parser);
        const std::size_t column = XML_GetCurrentColumnNumber(c.parser) + 1;
        if (!c.error.empty()) throw ParseError("malformed OSM XML: " + c.error, line, column);
        throw ParseError(std::string("malformed OSM XML: ") + XML_ErrorString(XML_GetErrorCode(c.parser)), line,
                         column);
    }

    FeatureSet out;
    out.source = source;
    out.crs_note = kMercatorCrsNote;
    std::set<std::string> seen;
    for (Way& w : c.ways) {
        const auto building = w.tags.find("building");
        if (building == w.tags.end() || building->second == "no") continue;
        if (w.refs.size() < 2 || w.refs.front() != w.refs.back()) continue;

        const std::string id = "way/" + w.id;
        std::vector<Coordinate> vertices;
        bool resolved = true;
        for (std::size_t i = 0; i + 1 < w.refs.size(); ++i) {
            const auto node = c.nodes.find(w.refs[i]);
            if (node == c.nodes.end()) {
                resolved = false;
                out.diagnostics.warnings.push_back(id + " references missing node " + std::to_string(w.refs[i]));
                break;
            }
            try {
                vertices.push_back(project_lonlat(node->second.lon, node->second.lat));
            } catch (const ValidationError& e) {
                throw ValidationError("feature '" + id + "': " + e.what());
            }
        }
        if (!resolved) {
            ++out.diagnostics.dropped_ways;
            continue;
        }
        if (!seen.insert(id).second) throw ValidationError("duplicate feature id '" + id + "'");
        try {
            out.features.push_back(Feature{id, Polygon(Ring(std::move(vertices))), source, std::move(w.tags)});
        } catch (const ValidationError& e) {
            throw ValidationError("feature '" + id + "': " + e.what());
        }
    }
    return out;
}

}  // namespace footeval
