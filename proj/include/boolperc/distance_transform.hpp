#pragma once

#include <limits>

#include <Eigen/Core>

namespace boolperc {

/// Squared Euclidean distance transform of a sampled function, one dimension:
/// out[q] = min_p (q - p)^2 + f[p]. Lower envelope of parabolas
/// (Felzenszwalb & Huttenlocher), linear time.
template <typename InVec, typename OutVec>
void squared_edt_1d(const InVec& f, OutVec&& out);

/**
 * Exact squared Euclidean distance transform on a regular grid in index
 * units: for every cell, the squared distance to the nearest cell where
 * `seeds` is true. Cells are +inf when there are no seeds.
 */
Eigen::ArrayXXd squared_edt(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& seeds);

// ---------------------------------------------------------------------------

template <typename InVec, typename OutVec>
void squared_edt_1d(const InVec& f, OutVec&& out) {
  const Eigen::Index n = f.size();
  if (n == 0) return;
  Eigen::VectorXi hull(n);
  Eigen::VectorXd bounds(n + 1);
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::Index k = -1;
  for (Eigen::Index q = 0; q < n; ++q) {
    if (!(f[q] < inf)) continue;
    const double fq = f[q] + static_cast<double>(q) * q;
    while (k >= 0) {
      const Eigen::Index p = hull[k];
      const double s = (fq - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s > bounds[k]) {
        ++k;
        hull[k] = static_cast<int>(q);
        bounds[k] = s;
        bounds[k + 1] = inf;
        break;
      }
      --k;
    }
    if (k < 0) {
      k = 0;
      hull[0] = static_cast<int>(q);
      bounds[0] = -inf;
      bounds[1] = inf;
    }
  }
  if (k < 0) {
    for (Eigen::Index q = 0; q < n; ++q) out[q] = inf;
    return;
  }
  Eigen::Index j = 0;
  for (Eigen::Index q = 0; q < n; ++q) {
    while (bounds[j + 1] < static_cast<double>(q)) ++j;
    const double d = static_cast<double>(q - hull[j]);
    out[q] = d * d + f[hull[j]];
  }
}

}  // namespace boolperc
