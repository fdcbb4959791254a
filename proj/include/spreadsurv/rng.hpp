#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spreadsurv {

/// Deterministic random source. All variates are derived from raw mt19937_64
/// output with explicit inverse-CDF / Box-Muller formulas, so a given seed
/// produces the same stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Inclusive integer range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        auto offset = static_cast<std::int64_t>(uniform() * span);
        if (offset > hi - lo) offset = hi - lo;
        return lo + offset;
    }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Geometric on {0, 1, 2, ...} with success probability p.
    std::int64_t geometric(double p) {
        return static_cast<std::int64_t>(std::floor(std::log1p(-uniform()) / std::log1p(-p)));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace spreadsurv
