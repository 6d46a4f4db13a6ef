#pragma once

/**
 * @file rng.hpp
 * @brief Counter-based random numbers and compensated summation.
 *
 * Monte-Carlo oracles draw sample i as a pure function of (seed, i), so any
 * partition of the index space over workers reproduces the same stream and
 * ensemble reductions stay order-independent.
 */

#include <cstdint>
#include <cmath>

#include "vec3.hpp"

namespace simqg {

namespace detail {
/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

/// Stateless counter RNG: value = f(seed, counter).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Uniform in (0, 1); never returns exactly 0 or 1.
    double uniform(std::uint64_t counter) const {
        const std::uint64_t u = detail::mix64(seed_ ^ detail::mix64(counter));
        return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (uses counters 2i, 2i+1).
    double normal(std::uint64_t i) const {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Three independent standard normals for sample i.
    Vec3 normal3(std::uint64_t i) const {
        return {normal(3 * i), normal(3 * i + 1), normal(3 * i + 2)};
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Neumaier compensated accumulator. Partition-invariant reductions sum
/// fixed-size chunks with this and combine the chunk totals in index order.
class NeumaierSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace simqg
