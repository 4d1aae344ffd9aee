#pragma once

#include <Eigen/Core>

#include "boolperc/crossing.hpp"
#include "boolperc/geometry.hpp"
#include "boolperc/sampler.hpp"

namespace boolperc {

/// Regular grid of nonnegative distances; values(i, j) sits at
/// origin + (i, j) * pitch.
struct ScalarField {
  Point origin = Point::Zero();
  double pitch = 1.0;
  Eigen::ArrayXXd values;

  Eigen::Index nx() const { return values.rows(); }
  Eigen::Index ny() const { return values.cols(); }
  Point at(Eigen::Index i, Eigen::Index j) const {
    return origin + pitch * Point(static_cast<double>(i), static_cast<double>(j));
  }
};

enum class WidthMethod { exact_bottleneck, exact_lower_bound, grid };

struct WidthResult {
  double width = 0.0;
  WidthMethod method = WidthMethod::exact_bottleneck;
  bool censored = false;
  double grid_error_bound = 0.0;
};

inline double default_pitch(double n) { return std::min(0.05, n / 400.0); }

/// Padding around the box that the occupied field sees.
inline constexpr double kFieldPadding = 2.0;

/// Maximal vacant width of horizontal crossings of [-n, n]^2, exactly:
/// 2 * max(r* - 1, 0) with r* the vertical occupied bottleneck radius.
/// +inf when no center can ever block (no centers at all).
WidthResult vacant_width(const PointSample& sample, double n);

/// Lower bound 2 * sqrt(1 - r0^2) on the occupied width, where r0 is the
/// smallest r <= 1 at which radius-r discs cross
/// [-(n + sqrt(1 - r^2)), n + sqrt(1 - r^2)] x [-(n - 1), n - 1]
/// horizontally. Bisection on r to 1e-9.
WidthResult occupied_width_lower(const PointSample& sample, double n);

/**
 * Grid samples of dist(x, V), V the vacant set, over `rect` at pitch h.
 *
 * Coverage is rasterized on the rectangle padded by kFieldPadding; the exact
 * distance transform to the uncovered grid points gives an upper bound, which
 * is then tightened to the exact distance to the union boundary using the
 * exposed arcs of nearby circles (vacant pockets smaller than h are not
 * missed).
 */
ScalarField occupied_distance_field(const PointSample& sample, const Rect& rect, double h);

/// dist(x, O) = max(0, min_i |x - c_i| - 1); +inf without centers.
double vacant_distance(const Point& x, const PointSample& sample);

/// vacant_distance on every grid point of `rect` at pitch h.
ScalarField vacant_distance_field(const PointSample& sample, const Rect& rect, double h);

/// Max over 8-connected grid paths joining the two opposite sides of the
/// minimum field value along the path (bottleneck Dijkstra).
double widest_path(const ScalarField& field, Orientation orientation);

/// 2 * widest_path(occupied_distance_field) over [-n, n]^2, horizontal. The
/// field is only evaluated on clusters that touch both sides; other points
/// count as zero, which leaves the widest path unchanged.
WidthResult occupied_width(const PointSample& sample, double n, double h);

}  // namespace boolperc
