#include "spreadsurv/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spreadsurv {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869;  // 1/sqrt(pi)

// Asymptotic expansion of erfcx for large u:
//   erfcx(u) ~ 1/(u*sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2u^2)^n
double erfcx_asymptotic(double u) {
    const double inv2u2 = 1.0 / (2.0 * u * u);
    double term = 1.0;
    double sum = 1.0;
    double coeff = 1.0;  // (2n-1)!!
    for (int n = 1; n <= 8; ++n) {
        coeff *= 2 * n - 1;
        term *= -inv2u2;
        sum += coeff * term;
    }
    return sum * kInvSqrtPi / u;
}

}  // namespace

double erfcx(double u) {
    if (u > 20.0) return erfcx_asymptotic(u);
    // exp(u^2) stays finite for u <= 20 and erfc(u) is a normal double there.
    return std::exp(u * u) * std::erfc(u);
}

double log_half_erfc(double u) {
    if (u <= 20.0) return std::log(0.5 * std::erfc(u));
    return std::log(0.5) - u * u + std::log(erfcx_asymptotic(u));
}

double erfc_hazard(double u) {
    if (u < 0.0) {
        // erfc(u) in (1, 2]: the direct ratio is well conditioned.
        return 2.0 * kInvSqrtPi * std::exp(-u * u) / std::erfc(u);
    }
    return 2.0 * kInvSqrtPi / erfcx(u);
}

double normal_two_sided_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    // Solve erfc(z / sqrt(2)) = alpha for z by bisection; the interval
    // [0, 40] covers every alpha representable as a double.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid / std::sqrt(2.0)) > alpha) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace spreadsurv
