#include "boolperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boolperc/errors.hpp"

namespace boolperc {

Proportion proportion(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw ParameterError("proportion needs 0 <= successes <= trials and trials > 0");
  }
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  p.value = static_cast<double>(successes) / static_cast<double>(trials);
  p.std_error = std::sqrt(p.value * (1.0 - p.value) / static_cast<double>(trials));
  return p;
}

namespace {

double ratio(double diff, double se) {
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double pooled_z(const Proportion& a, const Proportion& b) {
  const double n1 = static_cast<double>(a.trials);
  const double n2 = static_cast<double>(b.trials);
  const double pooled = (static_cast<double>(a.successes) + static_cast<double>(b.successes)) / (n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  return ratio(std::abs(a.value - b.value), se);
}

double combined_z(double a, double sa, double b, double sb) {
  return ratio(std::abs(a - b), std::sqrt(sa * sa + sb * sb));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ParameterError("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace boolperc
