#pragma once

#include <cstdint>
#include <vector>

#include "boolperc/geometry.hpp"
#include "boolperc/rng.hpp"

namespace boolperc {

/// One realization of a homogeneous Poisson process restricted to `region`.
struct PointSample {
  std::vector<Point> centers;
  double intensity = 0.0;
  std::uint64_t seed = 0;
  Rect region;
  double margin = 0.0;  ///< padding of `region` beyond the query rectangle

  std::size_t size() const { return centers.size(); }

  /// Padding actually available around `query` inside the sampled region.
  double margin_around(const Rect& query) const { return query.inset_in(region); }

  PointSample with_center(const Point& extra) const;
};

/// A Poisson sample at intensity `max_intensity` whose points carry the
/// intensity level at which they appear. Keeping the points with
/// `levels[i] <= lambda` yields a Poisson process of intensity `lambda`, so a
/// single realization couples all intensities in [0, max_intensity].
struct MarkedSample {
  PointSample points;
  std::vector<double> levels;

  PointSample at_intensity(double lambda) const;
};

/// Draw a Poisson(mean) count: CDF inversion below mean 10, Hormann's PTRS
/// transformed rejection above.
std::uint64_t poisson_count(double mean, Philox4x32& rng);

/// Homogeneous Poisson process on `region`. The realization is a pure
/// function of (region, lambda, seed); `seed` selects the stream.
PointSample sample_poisson(const Rect& region, double lambda, std::uint64_t seed);

/// Sample on `query` dilated by `margin` and record the margin.
PointSample sample_padded(const Rect& query, double margin, double lambda, std::uint64_t seed);

MarkedSample sample_marked(const Rect& query, double margin, double max_lambda,
                           std::uint64_t seed);

/// Map every center x to x / factor. The pushforward of a Poisson process of
/// intensity lambda is Poisson with intensity lambda * factor^2.
PointSample rescale_sample(const PointSample& sample, double factor);

/// Per-sample seed for index `index` of an experiment keyed by `master_seed`.
inline std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) {
  return derive_seed(master_seed, index);
}

}  // namespace boolperc
