#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "boolperc/geometry.hpp"
#include "boolperc/sampler.hpp"

namespace boolperc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CrossingQuery {
  Rect rect;
  Orientation orientation = Orientation::horizontal;
  double radius = 1.0;
};

struct BottleneckResult {
  double r_star = kInfinity;
  /// Center indices (into the sample) of a chain from the first side to the
  /// second whose consecutive activation radii are all <= r_star.
  std::vector<std::uint32_t> witness;
  /// r_star exceeds the padding of the sampled window, so unsampled centers
  /// could have produced a smaller value.
  bool censored = true;
};

/**
 * Does the union of closed radius-r discs, clipped to the query rectangle,
 * join the two sides selected by the orientation?
 *
 * Each clipped disc is convex, so two of them touch exactly when their
 * activation radius is at most r; connectivity of the clipped union is then a
 * union-find over a graph with two extra side nodes.
 *
 * Throws CensoringError when the sample's padding around the rectangle is
 * smaller than the radius.
 */
bool occupied_crossing(const PointSample& sample, const CrossingQuery& query);

/// Vacant crossing of `rect` at unit radius: by planar duality, the negation
/// of the occupied crossing in the transposed orientation. Tangencies count
/// as occupied.
bool vacant_crossing(const PointSample& sample, const Rect& rect, Orientation orientation);

/// Minimal disc radius at which an occupied crossing exists (minimax chain),
/// found by Kruskal over candidate edges within a search radius that doubles
/// until the sides join.
BottleneckResult bottleneck_radius(const PointSample& sample, const Rect& rect,
                                   Orientation orientation, double initial_radius = 1.0);

/// Smallest level in a marked sample at which the occupied set at `radius`
/// crosses; +inf when even the full sample does not cross. Requires the
/// padding around rect to be at least `radius`.
double threshold_intensity(const MarkedSample& sample, const CrossingQuery& query);

}  // namespace boolperc
