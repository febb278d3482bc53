#include <cmath>
#include <numbers>
#include <string>

#include "footeval/error.hpp"
#include "footeval/geometry.hpp"

namespace footeval {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

Coordinate project_lonlat(double lon, double lat) {
    if (!(std::abs(lat) < kMercatorLatitudeLimit)) {
        throw ValidationError("latitude " + std::to_string(lat) + " is outside the Web Mercator range");
    }
    if (!(lon >= -180.0 && lon <= 180.0)) {
        throw ValidationError("longitude " + std::to_string(lon) + " is outside [-180, 180]");
    }
    return {kMercatorRadius * lon * kDegToRad,
            kMercatorRadius * std::log(std::tan(std::numbers::pi / 4.0 + lat * kDegToRad / 2.0))};
}

LonLat unproject(Coordinate c) {
    return {c.x / kMercatorRadius / kDegToRad,
            (2.0 * std::atan(std::exp(c.y / kMercatorRadius)) - std::numbers::pi / 2.0) / kDegToRad};
}

}  // namespace footeval
