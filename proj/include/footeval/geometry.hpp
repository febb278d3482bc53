#pragma once

#include <span>
#include <vector>

namespace footeval {

/// Planar position in meters (easting, northing).
struct Coordinate {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

/// Axis-aligned rectangle in meters. Closed on all sides.
struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }

    bool contains(Coordinate p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    bool intersects(const Rect& o) const {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
    Rect expanded(double margin) const {
        return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
    }
    Rect united(const Rect& o) const;

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Closed vertex loop. The closing vertex is implicit; construction rejects
/// non-finite coordinates, fewer than 3 distinct vertices, repeated consecutive
/// vertices, zero area and self-intersection.
class Ring {
public:
    explicit Ring(std::vector<Coordinate> vertices);

    std::span<const Coordinate> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Coordinate& operator[](std::size_t i) const { return vertices_[i]; }

    Ring reversed() const;

private:
    struct Trusted {};
    Ring(std::vector<Coordinate> vertices, Trusted) : vertices_(std::move(vertices)) {}

    std::vector<Coordinate> vertices_;
};

/// Simple polygon with optional holes. The outer ring is stored counter-clockwise,
/// holes clockwise, regardless of the orientation they were supplied in.
class Polygon {
public:
    explicit Polygon(Ring outer, std::vector<Ring> holes = {});

    const Ring& outer() const { return outer_; }
    const std::vector<Ring>& holes() const { return holes_; }

    /// Outer ring followed by holes.
    std::vector<const Ring*> rings() const;

private:
    Ring outer_;
    std::vector<Ring> holes_;
};

/// Polygon covering `r`. Throws ValidationError when `r` has zero width or height.
Polygon rectangle(const Rect& r);
Polygon translated(const Polygon& p, double dx, double dy);

/// Shoelace area: positive for counter-clockwise rings, negative for clockwise.
double ring_area(const Ring& r);
double polygon_area(const Polygon& p);
Rect bounding_box(const Polygon& p);
Rect bounding_box(std::span<const Coordinate> points);
/// Area-weighted centroid, holes subtracted.
Coordinate centroid(const Polygon& p);
/// Even-odd membership over all rings. Points exactly on the boundary may go either way.
bool contains(const Polygon& p, Coordinate point);

/// Below this intersection area two polygons do not count as overlapping (m²).
inline constexpr double kOverlapEpsilon = 1e-6;

double intersection_area(const Polygon& a, const Polygon& b);
double iou(const Polygon& a, const Polygon& b);
bool overlaps(const Polygon& a, const Polygon& b, double epsilon_area = kOverlapEpsilon);

/// Spherical Web Mercator radius (m).
inline constexpr double kMercatorRadius = 6378137.0;
/// Exclusive latitude bound accepted by project_lonlat (degrees).
inline constexpr double kMercatorLatitudeLimit = 85.06;

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;
};

/// Throws ValidationError for latitudes outside the Mercator range or longitudes outside [-180, 180].
Coordinate project_lonlat(double lon, double lat);
LonLat unproject(Coordinate c);

}  // namespace footeval
