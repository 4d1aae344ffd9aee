#pragma once

#include <Eigen/Core>

namespace boolperc {

using Point = Eigen::Vector2d;

enum class Orientation { horizontal, vertical };

constexpr Orientation transposed(Orientation o) {
  return o == Orientation::horizontal ? Orientation::vertical : Orientation::horizontal;
}

/// Closed axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  /// The centered rectangle [-half_width, half_width] x [-half_height, half_height].
  static Rect centered(double half_width, double half_height) {
    return {-half_width, half_width, -half_height, half_height};
  }
  static Rect square(double half_side) { return centered(half_side, half_side); }

  bool valid() const;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool contains(const Point& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  Rect dilated(double margin) const {
    return {x_min - margin, x_max + margin, y_min - margin, y_max + margin};
  }
  /// Every coordinate divided by `factor`.
  Rect shrunk(double factor) const {
    return {x_min / factor, x_max / factor, y_min / factor, y_max / factor};
  }
  /// Largest m such that dilated(m) is contained in `outer`.
  double inset_in(const Rect& outer) const;

  bool operator==(const Rect&) const = default;
};

struct Segment {
  Point a;
  Point b;
};

/// The two sides an occupied crossing in `orientation` must join
/// (left/right for horizontal, bottom/top for vertical).
std::pair<Segment, Segment> crossing_sides(const Rect& rect, Orientation orientation);

double point_segment_distance(const Point& p, const Segment& s);

/// Euclidean distance from p to the closed rectangle (0 inside).
double distance_to_rect(const Point& p, const Rect& rect);

/**
 * Smallest r such that B(c1, r), B(c2, r) and `rect` share a point, i.e.
 * min over x in rect of max(|x - c1|, |x - c2|).
 *
 * The unconstrained minimizer is the midpoint. When it lies outside the
 * rectangle the convex objective attains its minimum on the boundary, so each
 * edge is minimized in closed form over its candidate points: the projections
 * of c1 and c2, the intersection with the perpendicular bisector, and the
 * endpoints.
 */
double activation_radius(const Point& c1, const Point& c2, const Rect& rect);

/// Smallest r such that B(c, r) touches the side segment.
inline double boundary_activation(const Point& c, const Segment& side) {
  return point_segment_distance(c, side);
}

}  // namespace boolperc
