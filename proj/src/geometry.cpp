#include "boolperc/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace boolperc {

bool Rect::valid() const {
  return std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
         std::isfinite(y_max) && x_min < x_max && y_min < y_max;
}

double Rect::inset_in(const Rect& outer) const {
  return std::min({x_min - outer.x_min, outer.x_max - x_max, y_min - outer.y_min,
                   outer.y_max - y_max});
}

std::pair<Segment, Segment> crossing_sides(const Rect& r, Orientation orientation) {
  if (orientation == Orientation::horizontal) {
    return {Segment{{r.x_min, r.y_min}, {r.x_min, r.y_max}},
            Segment{{r.x_max, r.y_min}, {r.x_max, r.y_max}}};
  }
  return {Segment{{r.x_min, r.y_min}, {r.x_max, r.y_min}},
          Segment{{r.x_min, r.y_max}, {r.x_max, r.y_max}}};
}

double point_segment_distance(const Point& p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - s.a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (s.a + t * d - p).norm();
}

double distance_to_rect(const Point& p, const Rect& rect) {
  const double dx = std::max({rect.x_min - p.x(), 0.0, p.x() - rect.x_max});
  const double dy = std::max({rect.y_min - p.y(), 0.0, p.y() - rect.y_max});
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

double edge_minimum(const Point& c1, const Point& c2, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = d.squaredNorm();
  auto objective = [&](double t) {
    const Point x = s.a + t * d;
    return std::max((x - c1).norm(), (x - c2).norm());
  };
  std::array<double, 5> candidates{0.0, 1.0, 0.0, 0.0, 0.0};
  int count = 2;
  candidates[count++] = std::clamp((c1 - s.a).dot(d) / len2, 0.0, 1.0);
  candidates[count++] = std::clamp((c2 - s.a).dot(d) / len2, 0.0, 1.0);
  // |x - c1|^2 = |x - c2|^2 is linear in t along the edge.
  const Point diff = c2 - c1;
  const double slope = 2.0 * d.dot(diff);
  if (slope != 0.0) {
    const double t = (c2.squaredNorm() - c1.squaredNorm() - 2.0 * s.a.dot(diff)) / slope;
    if (t > 0.0 && t < 1.0) candidates[count++] = t;
  }
  double best = objective(candidates[0]);
  for (int i = 1; i < count; ++i) best = std::min(best, objective(candidates[i]));
  return best;
}

}  // namespace

double activation_radius(const Point& c1, const Point& c2, const Rect& rect) {
  const Point mid = 0.5 * (c1 + c2);
  if (rect.contains(mid)) return 0.5 * (c1 - c2).norm();
  const Point p00{rect.x_min, rect.y_min};
  const Point p10{rect.x_max, rect.y_min};
  const Point p11{rect.x_max, rect.y_max};
  const Point p01{rect.x_min, rect.y_max};
  return std::min({edge_minimum(c1, c2, {p00, p10}), edge_minimum(c1, c2, {p10, p11}),
                   edge_minimum(c1, c2, {p11, p01}), edge_minimum(c1, c2, {p01, p00})});
}

}  // namespace boolperc
