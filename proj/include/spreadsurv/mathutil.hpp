#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spreadsurv {

/// Scaled complementary error function exp(u^2) * erfc(u).
/// Valid for all u that matter here; uses an asymptotic series for large
/// positive u where the direct product would lose precision.
double erfcx(double u);

/// log(0.5 * erfc(u)) without catastrophic cancellation for large |u|.
double log_half_erfc(double u);

/// d/du log(0.5 * erfc(u)) = -2/sqrt(pi) * exp(-u^2) / erfc(u), negated:
/// the positive hazard-like factor (2/sqrt(pi)) * exp(-u^2) / erfc(u).
double erfc_hazard(double u);

/// Upper-tail standard normal quantile: z with P(Z > z) = alpha/2,
/// i.e. the two-sided critical value at level alpha.
double normal_two_sided_critical(double alpha);

/// Fixed-order pairwise summation; deterministic and more accurate than a
/// running sum for long series.
double pairwise_sum(std::span<const double> values);

/// Median of a sample; even counts return the mean of the two central
/// order statistics. Input is copied, not modified.
double median(std::vector<double> values);

}  // namespace spreadsurv
