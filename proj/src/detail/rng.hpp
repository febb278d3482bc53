#pragma once

#include <cstdint>
#include <random>

namespace footeval::detail {

// Distribution helpers with a fixed algorithm: std:: distributions differ between
// standard libraries, which would break byte-identical outputs across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi].
    int between(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::uint64_t>(hi - lo) + 1)); }

private:
    std::mt19937_64 engine_;
};

}  // namespace footeval::detail
