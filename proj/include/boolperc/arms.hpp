#pragma once

#include <cstdint>

#include "boolperc/geometry.hpp"
#include "boolperc/sampler.hpp"

namespace boolperc {

/// Annulus B(0, r_outer) \ B(0, r_inner) rasterized at pitch h.
struct ArmQuery {
  double r_inner = 1.0;
  double r_outer = 1.0;
  double pitch = 0.1;
};

enum class Pi4Method { pivotal, annulus };

struct Pi4Estimate {
  double value = 0.0;
  double std_error = 0.0;
  Pi4Method method = Pi4Method::pivotal;
  std::int64_t n_samples = 0;
};

struct AlphaEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct RussoResult {
  double lhs = 0.0;
  double lhs_error = 0.0;
  double rhs = 0.0;
  double rhs_error = 0.0;
  double z = 0.0;
};

/// Padding used for arm and pivotality samples.
inline constexpr double kArmMargin = 4.0;

/// True iff `rect` has no horizontal occupied crossing but gains one when a
/// unit disc centered at x is added.
bool is_pivotal(const PointSample& sample, const Rect& rect, const Point& x);

/**
 * Four alternating arms (occupied, vacant, occupied, vacant) across the
 * annulus centered at the origin.
 *
 * Occupancy is sampled at cell centers. Occupied cells connect through their
 * 8 neighbours and vacant cells through 4, so the two kinds of arm cannot
 * cross each other on the raster. An arm is a component touching both ring
 * boundaries; the event holds when the arms' cells along the inner boundary,
 * read in angular order, alternate at least four times around the circle.
 * A degenerate annulus (r_inner == r_outer) counts as satisfied.
 */
bool four_arm_annulus(const PointSample& sample, const ArmQuery& query);

/// Monte Carlo pi_4 at scale n: either pivotality of the center of [-n, n]^2
/// or the annulus event A4(1, n) at pitch `pitch`.
Pi4Estimate estimate_pi4(double lambda, double n, std::int64_t samples, Pi4Method method,
                         std::uint64_t seed, int threads = 1, double pitch = 0.1);

/// alpha_n = 1 / (pi_4 n^2) with a delta-method error.
AlphaEstimate alpha_n(const Pi4Estimate& pi4, double n);

/**
 * Compare d/dlambda P[cross(n)] with the integral of the pivotal probability.
 *
 * lhs is the symmetric difference quotient over [lambda - dlambda,
 * lambda + dlambda] estimated with common random numbers: each marked sample
 * contributes its crossing threshold, so the difference is the fraction of
 * thresholds in that interval. rhs integrates P[x pivotal] over
 * [-n-1, n+1]^2 (a pivotal disc may sit outside the box) by uniform x.
 * The two halves use independent seeds.
 */
RussoResult russo_check(double lambda, double n, double dlambda, std::int64_t samples,
                        std::uint64_t seed, int threads = 1);

}  // namespace boolperc
