#include "footeval/ingest.hpp"

namespace footeval {

FeatureSet clip_to_boundary(const FeatureSet& fs, const Rect& boundary) {
    FeatureSet out;
    out.source = fs.source;
    out.crs_note = fs.crs_note;
    out.metadata = fs.metadata;
    out.extent = boundary;
    out.diagnostics = fs.diagnostics;
    for (const Feature& f : fs.features) {
        if (boundary.contains(centroid(f.geometry))) out.features.push_back(f);
    }
    return out;
}

}  // namespace footeval
