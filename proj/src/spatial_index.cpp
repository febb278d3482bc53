#include <algorithm>
#include <cmath>

#include "footeval/match.hpp"

namespace footeval {

namespace {
// Caps memory for sparse layouts with a tiny median box.
constexpr long kMaxCells = 1L << 22;
}

SpatialIndex::SpatialIndex(std::vector<Rect> boxes, double cell_size) : boxes_(std::move(boxes)) {
    if (boxes_.empty()) return;

    bounds_ = boxes_.front();
    std::vector<double> diagonals;
    diagonals.reserve(boxes_.size());
    for (const Rect& b : boxes_) {
        bounds_ = bounds_.united(b);
        diagonals.push_back(std::hypot(b.width(), b.height()));
    }
    if (!(cell_size > 0.0)) {
        auto mid = diagonals.begin() + static_cast<std::ptrdiff_t>(diagonals.size() / 2);
        std::nth_element(diagonals.begin(), mid, diagonals.end());
        cell_size = *mid;
    }
    const double span = std::max(bounds_.width(), bounds_.height());
    if (!(cell_size > 0.0)) cell_size = span > 0.0 ? span : 1.0;
    cell_ = cell_size;
    auto dims = [&] {
        cols_ = static_cast<long>(std::floor(bounds_.width() / cell_)) + 1;
        rows_ = static_cast<long>(std::floor(bounds_.height() / cell_)) + 1;
    };
    dims();
    while (cols_ * rows_ > kMaxCells) {
        cell_ *= 2.0;
        dims();
    }

    cells_.resize(static_cast<std::size_t>(cols_ * rows_));
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        const auto [c0, r0] = cell_of(boxes_[i].min_x, boxes_[i].min_y);
        const auto [c1, r1] = cell_of(boxes_[i].max_x, boxes_[i].max_y);
        for (long r = r0; r <= r1; ++r) {
            for (long c = c0; c <= c1; ++c) cells_[static_cast<std::size_t>(r * cols_ + c)].push_back(i);
        }
    }
}

std::pair<long, long> SpatialIndex::cell_of(double x, double y) const {
    const long c = static_cast<long>(std::floor((x - bounds_.min_x) / cell_));
    const long r = static_cast<long>(std::floor((y - bounds_.min_y) / cell_));
    return {std::clamp(c, 0L, cols_ - 1), std::clamp(r, 0L, rows_ - 1)};
}

std::vector<std::size_t> SpatialIndex::query(const Rect& q) const {
    std::vector<std::size_t> out;
    if (boxes_.empty() || !q.intersects(bounds_)) return out;
    const auto [c0, r0] = cell_of(q.min_x, q.min_y);
    const auto [c1, r1] = cell_of(q.max_x, q.max_y);
    for (long r = r0; r <= r1; ++r) {
        for (long c = c0; c <= c1; ++c) {
            for (std::size_t i : cells_[static_cast<std::size_t>(r * cols_ + c)]) {
                if (boxes_[i].intersects(q)) out.push_back(i);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SpatialIndex build_spatial_index(const FeatureSet& fs) {
    std::vector<Rect> boxes;
    boxes.reserve(fs.size());
    for (const Feature& f : fs.features) boxes.push_back(bounding_box(f.geometry));
    return SpatialIndex(std::move(boxes));
}

}  // namespace footeval
