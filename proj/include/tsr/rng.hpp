#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tsr {

// Deterministic RNG used everywhere randomness is needed. mt19937_64 output
// is pinned by the standard, and the derived draws below avoid the
// implementation-defined std distributions, so sequences are reproducible
// across platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // Draw an index from a cumulative weight table (strictly increasing,
    // back() = total). Binary search on a single uniform draw.
    std::size_t weighted(std::span<const double> cumulative) {
        const double u = uniform() * cumulative.back();
        std::size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace tsr
