#include "boolperc/sampler.hpp"

#include <cmath>

#include "boolperc/errors.hpp"

namespace boolperc {

std::uint64_t poisson_count(double mean, Philox4x32& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    // Sequential search on the CDF.
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p < 1e-300 && cdf >= 1.0 - 1e-15) break;
    }
    return k;
  }
  // PTRS, W. Hormann, "The transformed rejection method for generating
  // Poisson random variables" (1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

namespace {

void check_region(const Rect& region, double lambda) {
  if (!region.valid()) throw ParameterError("sampling region is degenerate or non-finite");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ParameterError("intensity must be finite and nonnegative");
  }
}

}  // namespace

PointSample PointSample::with_center(const Point& extra) const {
  PointSample out = *this;
  out.centers.push_back(extra);
  return out;
}

PointSample MarkedSample::at_intensity(double lambda) const {
  PointSample out;
  out.intensity = lambda;
  out.seed = points.seed;
  out.region = points.region;
  out.margin = points.margin;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] <= lambda) out.centers.push_back(points.centers[i]);
  }
  return out;
}

PointSample sample_poisson(const Rect& region, double lambda, std::uint64_t seed) {
  check_region(region, lambda);
  PointSample out;
  out.intensity = lambda;
  out.seed = seed;
  out.region = region;
  Philox4x32 rng(seed, 0);
  const std::uint64_t count = poisson_count(lambda * region.area(), rng);
  out.centers.reserve(count);
  const double w = region.width();
  const double h = region.height();
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = region.x_min + w * rng.uniform();
    const double y = region.y_min + h * rng.uniform();
    out.centers.emplace_back(x, y);
  }
  return out;
}

PointSample sample_padded(const Rect& query, double margin, double lambda, std::uint64_t seed) {
  if (!std::isfinite(margin) || margin < 0.0) throw ParameterError("margin must be >= 0");
  PointSample out = sample_poisson(query.dilated(margin), lambda, seed);
  out.margin = margin;
  return out;
}

MarkedSample sample_marked(const Rect& query, double margin, double max_lambda,
                           std::uint64_t seed) {
  MarkedSample out;
  out.points = sample_padded(query, margin, max_lambda, seed);
  // Levels come from a separate stream so the positions equal those of
  // sample_padded at max_lambda.
  Philox4x32 rng(seed, 1);
  out.levels.resize(out.points.size());
  for (double& level : out.levels) level = max_lambda * rng.uniform();
  return out;
}

PointSample rescale_sample(const PointSample& sample, double factor) {
  if (!std::isfinite(factor) || factor <= 0.0) {
    throw ParameterError("rescale factor must be positive");
  }
  if (factor == 1.0) return sample;
  PointSample out;
  out.seed = sample.seed;
  out.intensity = sample.intensity * factor * factor;
  out.region = sample.region.shrunk(factor);
  out.margin = sample.margin / factor;
  out.centers.reserve(sample.size());
  for (const Point& c : sample.centers) out.centers.push_back(c / factor);
  return out;
}

}  // namespace boolperc
