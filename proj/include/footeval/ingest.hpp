#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "footeval/geometry.hpp"

namespace footeval {

enum class Source { prediction, ground_truth };

std::string_view to_string(Source s);

/// One building footprint.
struct Feature {
    std::string id;
    Polygon geometry;
    Source source = Source::ground_truth;
    std::map<std::string, std::string> tags;
};

/// Non-fatal events recorded while reading a document.
struct IngestDiagnostics {
    std::size_t skipped_geometries = 0;  ///< non-polygonal or null GeoJSON geometries
    std::size_t dropped_ways = 0;        ///< OSM building ways with unresolved node refs
    std::vector<std::string> warnings;
};

/// Ordered, id-unique collection of features from a single source.
struct FeatureSet {
    Source source = Source::ground_truth;
    std::vector<Feature> features;
    /// How coordinates reached the planar frame ("planar-meters" or the projection used).
    std::string crs_note;
    /// Free-form provenance carried by the document (the `run_parameters` member in GeoJSON).
    std::map<std::string, std::string> metadata;
    /// Document-declared extent, already in the planar frame.
    std::optional<Rect> extent;
    IngestDiagnostics diagnostics;

    std::size_t size() const { return features.size(); }
    bool empty() const { return features.empty(); }
};

inline constexpr std::string_view kPlanarCrsNote = "planar-meters";
inline constexpr std::string_view kMercatorCrsNote = "EPSG:3857 spherical web mercator from lon/lat";

/// Parses an RFC 7946 FeatureCollection. Polygon features become one Feature each;
/// MultiPolygon parts become `<id>/<k>`. Coordinates are taken as lon/lat and projected
/// unless the top-level member `"crs_note": "planar-meters"` is present.
///
/// Throws ParseError for malformed JSON or structure, ValidationError (naming the
/// feature id) for invalid rings or duplicate ids.
FeatureSet parse_geojson(std::string_view text, Source source);

/// Reads `<node>` / `<way>` elements. Every closed way with a `building` tag (other than
/// `building=no`) becomes a Feature with id `way/<id>`. Ways that reference unknown nodes
/// are dropped and counted in diagnostics.dropped_ways.
FeatureSet parse_osm_xml(std::string_view text, Source source = Source::ground_truth);

/// Reads a GeoJSON or OSM XML file, choosing the parser from the first non-blank byte.
/// A missing or unreadable file is reported as ParseError.
FeatureSet read_feature_file(const std::filesystem::path& path, Source source);

/// Keeps the features whose centroid lies inside `boundary` (closed). Geometries are not cut.
FeatureSet clip_to_boundary(const FeatureSet& fs, const Rect& boundary);

}  // namespace footeval
