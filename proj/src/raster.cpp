#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "footeval/tiling.hpp"

namespace footeval {

BinaryMask::BinaryMask(int width, int height, Coordinate origin, double resolution_m)
    : width_(width), height_(height), origin_(origin), resolution_(resolution_m) {
    if (width < 0 || height < 0) throw ValidationError("mask dimensions must be non-negative");
    if (!(resolution_m > 0.0)) throw ValidationError("mask resolution must be positive");
    bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

/// Smallest index whose pixel-center coordinate is ≥ x along an axis starting at `origin`.
long first_center_at_or_after(double x, double origin, double res) {
    auto center = [&](long i) { return origin + (static_cast<double>(i) + 0.5) * res; };
    long i = static_cast<long>(std::ceil((x - origin) / res - 0.5));
    while (center(i - 1) >= x) --i;
    while (center(i) < x) ++i;
    return i;
}

}  // namespace

void rasterize(const Polygon& p, BinaryMask& mask) {
    const Rect box = bounding_box(p);
    if (!box.intersects(mask.world_bounds())) return;
    const double res = mask.resolution_m();
    const Coordinate o = mask.origin();

    const long r0 = std::max(0L, first_center_at_or_after(box.min_y, o.y, res));
    const long r1 = std::min(static_cast<long>(mask.height()), first_center_at_or_after(box.max_y, o.y, res) + 1);
    std::vector<double> xs;
    for (long r = r0; r < r1; ++r) {
        const double y = mask.pixel_center(0, static_cast<int>(r)).y;
        xs.clear();
        for (const Ring* ring : p.rings()) {
            const std::size_t n = ring->size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Coordinate a = (*ring)[i], b = (*ring)[j];
                if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const long c0 = std::max(0L, first_center_at_or_after(xs[k], o.x, res));
            const long c1 = std::min(static_cast<long>(mask.width()), first_center_at_or_after(xs[k + 1], o.x, res));
            for (long c = c0; c < c1; ++c) mask.set(static_cast<int>(c), static_cast<int>(r));
        }
    }
}

namespace {

// Edge directions: east, north, west, south. Foreground is always on the left of an edge.
constexpr std::array<int, 4> kDx{1, 0, -1, 0};
constexpr std::array<int, 4> kDy{0, 1, 0, -1};
constexpr double kPinchOffset = 1e-6;

}  // namespace

std::vector<Polygon> polygonize(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    auto fg = [&](int c, int r) { return c >= 0 && r >= 0 && c < w && r < h && mask.at(c, r); };

    // 4-connected component labels.
    std::vector<int> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
    auto at = [&](int c, int r) -> int& { return label[static_cast<std::size_t>(r) * w + c]; };
    int components = 0;
    std::deque<std::pair<int, int>> queue;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(c, r) || at(c, r) >= 0) continue;
            at(c, r) = components;
            queue.emplace_back(c, r);
            while (!queue.empty()) {
                const auto [qc, qr] = queue.front();
                queue.pop_front();
                for (int d = 0; d < 4; ++d) {
                    const int nc = qc + kDx[d], nr = qr + kDy[d];
                    if (fg(nc, nr) && at(nc, nr) < 0) {
                        at(nc, nr) = components;
                        queue.emplace_back(nc, nr);
                    }
                }
            }
            ++components;
        }
    }
    if (components == 0) return {};

    // Directed boundary edges keyed by their start vertex on the (w+1)×(h+1) corner lattice.
    const int vw = w + 1;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(vw) * (h + 1), 0);
    std::vector<std::uint8_t> used(out.size(), 0);
    auto vid = [&](int c, int r) { return static_cast<std::size_t>(r) * vw + c; };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(c, r)) continue;
            if (!fg(c, r - 1)) out[vid(c, r)] |= 1 << 0;
            if (!fg(c + 1, r)) out[vid(c + 1, r)] |= 1 << 1;
            if (!fg(c, r + 1)) out[vid(c + 1, r + 1)] |= 1 << 2;
            if (!fg(c - 1, r)) out[vid(c, r + 1)] |= 1 << 3;
        }
    }

    const double res = mask.resolution_m();
    const Coordinate o = mask.origin();
    std::vector<std::vector<Ring>> outers(components), holes(components);

    for (int vr = 0; vr <= h; ++vr) {
        for (int vc = 0; vc <= w; ++vc) {
            for (int d0 = 0; d0 < 4; ++d0) {
                if (!(out[vid(vc, vr)] >> d0 & 1) || (used[vid(vc, vr)] >> d0 & 1)) continue;

                // The pixel left of the first edge owns the ring.
                const int pc = vc - (d0 == 1 || d0 == 2 ? 1 : 0);
                const int pr = vr - (d0 == 2 || d0 == 3 ? 1 : 0);
                const int owner = at(pc, pr);

                std::vector<Coordinate> vertices;
                int c = vc, r = vr, d = d0;
                do {
                    used[vid(c, r)] |= static_cast<std::uint8_t>(1 << d);
                    c += kDx[d];
                    r += kDy[d];
                    const std::uint8_t options = out[vid(c, r)];
                    int next = -1;
                    for (int turn : {1, 0, 3}) {
                        const int candidate = (d + turn) % 4;
                        if (options >> candidate & 1) {
                            next = candidate;
                            break;
                        }
                    }
                    const bool pinch = (options & (options - 1)) != 0;
                    if (next != d) {
                        Coordinate v{o.x + c * res, o.y + r * res};
                        if (pinch) {
                            v.x += kPinchOffset * res * (kDx[next] - kDx[d]);
                            v.y += kPinchOffset * res * (kDy[next] - kDy[d]);
                        }
                        vertices.push_back(v);
                    }
                    d = next;
                } while (!(c == vc && r == vr && d == d0));

                Ring ring(std::move(vertices));
                if (ring_area(ring) > 0.0) {
                    outers[owner].push_back(std::move(ring));
                } else {
                    holes[owner].push_back(std::move(ring));
                }
            }
        }
    }

    std::vector<Polygon> polys;
    polys.reserve(static_cast<std::size_t>(components));
    for (int k = 0; k < components; ++k) {
        if (outers[k].size() != 1) throw ValidationError("polygonize: component without a unique outer boundary");
        polys.emplace_back(std::move(outers[k].front()), std::move(holes[k]));
    }
    return polys;
}

}  // namespace footeval
