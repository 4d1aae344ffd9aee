#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boolperc {

/// Binomial proportion with its standard error sqrt(p(1-p)/n).
struct Proportion {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
};

Proportion proportion(std::int64_t successes, std::int64_t trials);

/// |p1 - p2| over the pooled binomial standard error. Zero when both
/// estimates are identical and degenerate, +inf when they differ but the
/// pooled error vanishes.
double pooled_z(const Proportion& a, const Proportion& b);

/// |a - b| / sqrt(sa^2 + sb^2) with the same degenerate conventions.
double combined_z(double a, double sa, double b, double sb);

/// Linear-interpolation sample quantile (type 7). Requires nonempty input.
double quantile(std::vector<double> values, double q);

/// Sample standard deviation of `values` (n - 1 denominator).
double sample_stddev(std::span<const double> values);

/// Default bootstrap batch size for derived-quantity errors.
inline constexpr std::int64_t kBootstrapBatch = 100;

}  // namespace boolperc
