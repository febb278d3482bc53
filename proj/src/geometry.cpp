#include "footeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detail/segments.hpp"
#include "footeval/error.hpp"

namespace footeval {

using detail::cross;
using detail::orient;
using detail::operator-;
using detail::segments_intersect;

namespace {

double shoelace(std::span<const Coordinate> v) {
    // Relative to the first vertex so large projected coordinates keep their precision.
    const Coordinate o = v[0];
    // Summed in both directions so a reversed ring gives exactly the negated value.
    double forward = 0.0;
    double backward = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        forward += cross(v[i] - o, v[i + 1] - o);
        backward += cross(v[n - i - 1] - o, v[n - i] - o);
    }
    return 0.25 * (forward + backward);
}

bool is_simple(std::span<const Coordinate> v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Coordinate a1 = v[i];
        const Coordinate a2 = v[(i + 1) % n];
        // Adjacent edges may only share their common vertex; a collinear fold-back overlaps.
        const Coordinate a3 = v[(i + 2) % n];
        if (orient(a1, a2, a3) == 0.0 && detail::dot(a2 - a1, a3 - a2) < 0.0) return false;

        const double ax0 = std::min(a1.x, a2.x), ax1 = std::max(a1.x, a2.x);
        const double ay0 = std::min(a1.y, a2.y), ay1 = std::max(a1.y, a2.y);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Coordinate b1 = v[j];
            const Coordinate b2 = v[(j + 1) % n];
            if (std::max(b1.x, b2.x) < ax0 || std::min(b1.x, b2.x) > ax1 || std::max(b1.y, b2.y) < ay0 ||
                std::min(b1.y, b2.y) > ay1) {
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

bool rings_touch(const Ring& a, const Ring& b) {
    const std::size_t n = a.size(), m = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (segments_intersect(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m])) return true;
        }
    }
    return false;
}

bool ring_contains(const Ring& r, Coordinate p) {
    bool inside = false;
    const std::size_t n = r.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Coordinate a = r[i], b = r[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

Rect Rect::united(const Rect& o) const {
    return {std::min(min_x, o.min_x), std::min(min_y, o.min_y), std::max(max_x, o.max_x),
            std::max(max_y, o.max_y)};
}

Ring::Ring(std::vector<Coordinate> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) {
        throw ValidationError("ring has " + std::to_string(n) + " vertices, at least 3 are required");
    }
    for (const Coordinate& c : vertices_) {
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw ValidationError("ring has a non-finite coordinate");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (vertices_[i] == vertices_[(i + 1) % n]) {
            throw ValidationError("ring repeats vertex " + std::to_string(i) + " consecutively");
        }
    }
    if (shoelace(vertices_) == 0.0) throw ValidationError("ring encloses zero area");
    if (!is_simple(vertices_)) throw ValidationError("ring is self-intersecting");
}

Ring Ring::reversed() const {
    std::vector<Coordinate> v{vertices_.front()};
    v.insert(v.end(), vertices_.rbegin(), vertices_.rend() - 1);
    return Ring(std::move(v), Trusted{});
}

Polygon::Polygon(Ring outer, std::vector<Ring> holes) : outer_(std::move(outer)), holes_(std::move(holes)) {
    if (ring_area(outer_) < 0.0) outer_ = outer_.reversed();
    double hole_total = 0.0;
    for (std::size_t h = 0; h < holes_.size(); ++h) {
        if (ring_area(holes_[h]) > 0.0) holes_[h] = holes_[h].reversed();
        hole_total += -ring_area(holes_[h]);
        if (rings_touch(outer_, holes_[h])) {
            throw ValidationError("hole " + std::to_string(h) + " touches the outer ring");
        }
        if (!ring_contains(outer_, holes_[h][0])) {
            throw ValidationError("hole " + std::to_string(h) + " lies outside the outer ring");
        }
        for (std::size_t k = 0; k < h; ++k) {
            if (rings_touch(holes_[k], holes_[h]) || ring_contains(holes_[k], holes_[h][0]) ||
                ring_contains(holes_[h], holes_[k][0])) {
                throw ValidationError("holes " + std::to_string(k) + " and " + std::to_string(h) + " overlap");
            }
        }
    }
    if (!(ring_area(outer_) - hole_total > 0.0)) throw ValidationError("holes exceed the outer ring area");
}

std::vector<const Ring*> Polygon::rings() const {
    std::vector<const Ring*> out;
    out.reserve(1 + holes_.size());
    out.push_back(&outer_);
    for (const Ring& h : holes_) out.push_back(&h);
    return out;
}

Polygon rectangle(const Rect& r) {
    return Polygon(Ring({{r.min_x, r.min_y}, {r.max_x, r.min_y}, {r.max_x, r.max_y}, {r.min_x, r.max_y}}));
}

Polygon translated(const Polygon& p, double dx, double dy) {
    auto shift = [&](const Ring& r) {
        std::vector<Coordinate> v(r.vertices().begin(), r.vertices().end());
        for (Coordinate& c : v) c = {c.x + dx, c.y + dy};
        return Ring(std::move(v));
    };
    std::vector<Ring> holes;
    for (const Ring& h : p.holes()) holes.push_back(shift(h));
    return Polygon(shift(p.outer()), std::move(holes));
}

double ring_area(const Ring& r) { return shoelace(r.vertices()); }

double polygon_area(const Polygon& p) {
    double area = ring_area(p.outer());
    for (const Ring& h : p.holes()) area -= std::abs(ring_area(h));
    return area;
}

Rect bounding_box(std::span<const Coordinate> points) {
    Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Coordinate& c : points) {
        r.min_x = std::min(r.min_x, c.x);
        r.min_y = std::min(r.min_y, c.y);
        r.max_x = std::max(r.max_x, c.x);
        r.max_y = std::max(r.max_y, c.y);
    }
    return r;
}

Rect bounding_box(const Polygon& p) { return bounding_box(p.outer().vertices()); }

Coordinate centroid(const Polygon& p) {
    const Coordinate o = p.outer()[0];
    double sx = 0.0, sy = 0.0, twice_area = 0.0;
    for (const Ring* r : p.rings()) {
        const std::size_t n = r->size();
        for (std::size_t i = 0; i < n; ++i) {
            const Coordinate a = (*r)[i] - o;
            const Coordinate b = (*r)[(i + 1) % n] - o;
            const double c = cross(a, b);
            twice_area += c;
            sx += (a.x + b.x) * c;
            sy += (a.y + b.y) * c;
        }
    }
    return {o.x + sx / (3.0 * twice_area), o.y + sy / (3.0 * twice_area)};
}

bool contains(const Polygon& p, Coordinate point) {
    bool inside = false;
    for (const Ring* r : p.rings()) {
        if (ring_contains(*r, point)) inside = !inside;
    }
    return inside;
}

}  // namespace footeval
