#include <algorithm>
#include <cmath>
#include <vector>

#include "detail/segments.hpp"
#include "footeval/geometry.hpp"

// Intersection area by boundary integration: the boundary of A∩B consists of the
// parts of ∂A inside B and the parts of ∂B inside A, so the shoelace sum over those
// pieces is the area. Pieces shared by both boundaries are taken once (from A) when
// the two edges run the same way and dropped when they run opposite ways.

namespace footeval {

using detail::cross;
using detail::dot;
using detail::operator-;
using detail::operator+;
using detail::operator*;

namespace {

struct Shape {
    std::vector<std::vector<Coordinate>> rings;
    Rect box;
};

Shape localize(const Polygon& p, Coordinate origin) {
    Shape s;
    for (const Ring* r : p.rings()) {
        std::vector<Coordinate> v;
        v.reserve(r->size());
        for (const Coordinate& c : r->vertices()) v.push_back(c - origin);
        s.rings.push_back(std::move(v));
    }
    s.box = bounding_box(s.rings.front());
    return s;
}

enum class Side { inside, outside, boundary };

struct Classification {
    Side side;
    Coordinate edge_direction;
};

double segment_distance(Coordinate p, Coordinate a, Coordinate b) {
    const Coordinate d = b - a;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Coordinate q = a + t * d;
    return std::hypot(p.x - q.x, p.y - q.y);
}

Classification classify(const Shape& s, Coordinate p, double eps) {
    bool inside = false;
    for (const auto& ring : s.rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Coordinate a = ring[j], b = ring[i];
            if (segment_distance(p, a, b) <= eps) return {Side::boundary, b - a};
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < x) inside = !inside;
            }
        }
    }
    return {inside ? Side::inside : Side::outside, {}};
}

double boundary_contribution(const Shape& a, const Shape& b, bool take_shared, double eps) {
    const Rect reach = b.box.expanded(eps);
    double twice = 0.0;
    std::vector<double> cuts;
    for (const auto& ring : a.rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Coordinate p = ring[i];
            const Coordinate q = ring[(i + 1) % n];
            const Rect edge_box{std::min(p.x, q.x), std::min(p.y, q.y), std::max(p.x, q.x), std::max(p.y, q.y)};
            if (!edge_box.intersects(reach)) continue;

            const Coordinate d = q - p;
            const double len2 = dot(d, d);
            const double len = std::sqrt(len2);
            cuts.assign({0.0, 1.0});
            const Rect edge_reach = edge_box.expanded(eps);
            for (const auto& other : b.rings) {
                const std::size_t m = other.size();
                for (std::size_t j = 0; j < m; ++j) {
                    const Coordinate r = other[j];
                    const Coordinate s = other[(j + 1) % m];
                    if (std::max(r.x, s.x) < edge_reach.min_x || std::min(r.x, s.x) > edge_reach.max_x ||
                        std::max(r.y, s.y) < edge_reach.min_y || std::min(r.y, s.y) > edge_reach.max_y) {
                        continue;
                    }
                    const Coordinate e = s - r;
                    const double denom = cross(d, e);
                    const double elen = std::sqrt(dot(e, e));
                    if (std::abs(denom) > 1e-12 * len * elen) {
                        const double t = cross(r - p, e) / denom;
                        const double u = cross(r - p, d) / denom;
                        if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) cuts.push_back(t);
                    }
                    // Endpoints of the other edge lying on this edge (covers collinear overlap).
                    for (const Coordinate v : {r, s}) {
                        if (segment_distance(v, p, q) <= eps) {
                            const double t = dot(v - p, d) / len2;
                            if (t > 0.0 && t < 1.0) cuts.push_back(t);
                        }
                    }
                }
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double t0 = cuts[k], t1 = cuts[k + 1];
                if ((t1 - t0) * len <= eps) continue;
                const Coordinate p0 = p + t0 * d;
                const Coordinate p1 = p + t1 * d;
                const Classification c = classify(b, p + (0.5 * (t0 + t1)) * d, eps);
                if (c.side == Side::inside ||
                    (c.side == Side::boundary && take_shared && dot(c.edge_direction, d) > 0.0)) {
                    twice += cross(p0, p1);
                }
            }
        }
    }
    return 0.5 * twice;
}

}  // namespace

double intersection_area(const Polygon& a, const Polygon& b) {
    const Rect box_a = bounding_box(a);
    const Rect box_b = bounding_box(b);
    if (!box_a.intersects(box_b)) return 0.0;

    const Coordinate origin{std::min(box_a.min_x, box_b.min_x), std::min(box_a.min_y, box_b.min_y)};
    const Shape sa = localize(a, origin);
    const Shape sb = localize(b, origin);
    const Rect all = sa.box.united(sb.box);
    const double eps = 1e-9 * std::max({all.max_x, all.max_y, 1e-3});

    const double area = boundary_contribution(sa, sb, true, eps) + boundary_contribution(sb, sa, false, eps);
    return std::clamp(area, 0.0, std::min(polygon_area(a), polygon_area(b)));
}

double iou(const Polygon& a, const Polygon& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    const double uni = polygon_area(a) + polygon_area(b) - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

bool overlaps(const Polygon& a, const Polygon& b, double epsilon_area) {
    return intersection_area(a, b) > epsilon_area;
}

}  // namespace footeval
