#pragma once

#include <algorithm>

#include "footeval/geometry.hpp"

namespace footeval::detail {

inline Coordinate operator-(Coordinate a, Coordinate b) { return {a.x - b.x, a.y - b.y}; }
inline Coordinate operator+(Coordinate a, Coordinate b) { return {a.x + b.x, a.y + b.y}; }
inline Coordinate operator*(double s, Coordinate a) { return {s * a.x, s * a.y}; }

inline double cross(Coordinate a, Coordinate b) { return a.x * b.y - a.y * b.x; }
inline double dot(Coordinate a, Coordinate b) { return a.x * b.x + a.y * b.y; }

/// Twice the signed area of triangle (o, a, b).
inline double orient(Coordinate o, Coordinate a, Coordinate b) { return cross(a - o, b - o); }

inline int sign(double v) { return (v > 0.0) - (v < 0.0); }

/// r is collinear with pq and inside its bounding box.
inline bool on_segment(Coordinate p, Coordinate q, Coordinate r) {
    return orient(p, q, r) == 0.0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

/// Closed segments [p1,p2] and [q1,q2] share at least one point.
inline bool segments_intersect(Coordinate p1, Coordinate p2, Coordinate q1, Coordinate q2) {
    const int o1 = sign(orient(p1, p2, q1));
    const int o2 = sign(orient(p1, p2, q2));
    const int o3 = sign(orient(q1, q2, p1));
    const int o4 = sign(orient(q1, q2, p2));
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace footeval::detail
