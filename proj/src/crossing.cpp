#include "boolperc/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "boolperc/errors.hpp"
#include "boolperc/spatial_hash.hpp"

namespace boolperc {
namespace {

void require_margin(const PointSample& sample, const Rect& rect, double radius) {
  const double available = sample.margin_around(rect);
  if (available < radius) throw CensoringError(radius, available);
}

void check_query(const CrossingQuery& q) {
  if (!q.rect.valid()) throw ParameterError("query rectangle is degenerate");
  if (!std::isfinite(q.radius) || q.radius <= 0.0) {
    throw ParameterError("disc radius must be positive");
  }
}

/// Indices of centers whose radius-r disc meets the rectangle.
std::vector<std::uint32_t> relevant_centers(std::span<const Point> centers, const Rect& rect,
                                            double r) {
  std::vector<std::uint32_t> out;
  const double r2 = r * r;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Point& c = centers[i];
    const double dx = std::max({rect.x_min - c.x(), 0.0, c.x() - rect.x_max});
    const double dy = std::max({rect.y_min - c.y(), 0.0, c.y() - rect.y_max});
    if (dx * dx + dy * dy <= r2) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<Point> gather(std::span<const Point> centers, std::span<const std::uint32_t> ids) {
  std::vector<Point> out;
  out.reserve(ids.size());
  for (std::uint32_t i : ids) out.push_back(centers[i]);
  return out;
}

/// Distances to the two crossing sides of an axis-aligned rectangle; same
/// values as boundary_activation on the side segments.
struct SideDistance {
  Rect r;
  bool horizontal;

  static double norm2(double a, double b) { return std::sqrt(a * a + b * b); }
  static double along(double t, double lo, double hi) {
    return std::max({lo - t, 0.0, t - hi});
  }
  double first(const Point& p) const {
    return horizontal ? norm2(p.x() - r.x_min, along(p.y(), r.y_min, r.y_max))
                      : norm2(p.y() - r.y_min, along(p.x(), r.x_min, r.x_max));
  }
  double second(const Point& p) const {
    return horizontal ? norm2(p.x() - r.x_max, along(p.y(), r.y_min, r.y_max))
                      : norm2(p.y() - r.y_max, along(p.x(), r.x_min, r.x_max));
  }
  /// Cheap prefilter: the side is farther than r along its normal.
  bool near_first(const Point& p, double rad) const {
    return (horizontal ? p.x() - r.x_min : p.y() - r.y_min) <= rad;
  }
  bool near_second(const Point& p, double rad) const {
    return (horizontal ? r.x_max - p.x() : r.y_max - p.y()) <= rad;
  }
};

inline bool clipped_discs_meet(const Point& a, const Point& b, const Rect& rect, double r) {
  const double d2 = (a - b).squaredNorm();
  // A pair farther apart than 2r (with slack for rounding) can never meet.
  if (d2 > 4.0 * r * r * (1.0 + 1e-12)) return false;
  const Point mid = 0.5 * (a + b);
  if (rect.contains(mid)) return 0.5 * std::sqrt(d2) <= r;
  return activation_radius(a, b, rect) <= r;
}

bool crossing_on(std::span<const Point> centers, const CrossingQuery& q) {
  const auto ids = relevant_centers(centers, q.rect, q.radius);
  if (ids.empty()) return false;
  const CellGrid grid(gather(centers, ids), 2.0 * q.radius);
  const auto pts = grid.points();
  const auto m = static_cast<std::uint32_t>(pts.size());
  const std::uint32_t side_a = m;
  const std::uint32_t side_b = m + 1;
  const SideDistance sides{q.rect, q.orientation == Orientation::horizontal};

  UnionFind uf(m + 2);
  bool touches_a = false;
  bool touches_b = false;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (sides.near_first(pts[i], q.radius) && sides.first(pts[i]) <= q.radius) {
      uf.unite(i, side_a);
      touches_a = true;
    }
    if (sides.near_second(pts[i], q.radius) && sides.second(pts[i]) <= q.radius) {
      uf.unite(i, side_b);
      touches_b = true;
    }
  }
  if (!touches_a || !touches_b) return false;
  grid.for_each_pair([&](std::uint32_t i, std::uint32_t j) {
    if (clipped_discs_meet(pts[i], pts[j], q.rect, q.radius)) uf.unite(i, j);
  });
  return uf.connected(side_a, side_b);
}

struct Edge {
  double weight;
  std::uint32_t u;
  std::uint32_t v;
  bool operator<(const Edge& o) const { return std::tie(weight, u, v) < std::tie(o.weight, o.u, o.v); }
};

}  // namespace

CensoringError::CensoringError(double required_margin, double available_margin)
    : std::runtime_error("sampling margin " + std::to_string(available_margin) +
                         " is below the required margin " + std::to_string(required_margin)),
      required_(required_margin),
      available_(available_margin) {}

bool occupied_crossing(const PointSample& sample, const CrossingQuery& query) {
  check_query(query);
  require_margin(sample, query.rect, query.radius);
  return crossing_on(sample.centers, query);
}

bool vacant_crossing(const PointSample& sample, const Rect& rect, Orientation orientation) {
  return !occupied_crossing(sample, {rect, transposed(orientation), 1.0});
}

BottleneckResult bottleneck_radius(const PointSample& sample, const Rect& rect,
                                   Orientation orientation, double initial_radius) {
  if (!rect.valid()) throw ParameterError("query rectangle is degenerate");
  BottleneckResult result;
  if (sample.centers.empty()) return result;

  // Beyond this search radius every pair and every side is a candidate.
  Rect hull = rect;
  for (const Point& c : sample.centers) {
    hull.x_min = std::min(hull.x_min, c.x());
    hull.x_max = std::max(hull.x_max, c.x());
    hull.y_min = std::min(hull.y_min, c.y());
    hull.y_max = std::max(hull.y_max, c.y());
  }
  const double cover_radius = std::hypot(hull.width(), hull.height());
  const SideDistance sides{rect, orientation == Orientation::horizontal};

  double search = std::max(initial_radius, 1e-6);
  for (;;) {
    const auto ids = relevant_centers(sample.centers, rect, search);
    const CellGrid grid(gather(sample.centers, ids), 2.0 * search);
    const auto pts = grid.points();
    const auto m = static_cast<std::uint32_t>(pts.size());
    const std::uint32_t side_a = m;
    const std::uint32_t side_b = m + 1;

    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < m; ++i) {
      const double wa = sides.first(pts[i]);
      const double wb = sides.second(pts[i]);
      if (wa <= search) edges.push_back({wa, i, side_a});
      if (wb <= search) edges.push_back({wb, i, side_b});
    }
    const double reach2 = 4.0 * search * search * (1.0 + 1e-12);
    grid.for_each_pair([&](std::uint32_t i, std::uint32_t j) {
      if ((pts[i] - pts[j]).squaredNorm() > reach2) return;
      const double w = activation_radius(pts[i], pts[j], rect);
      if (w <= search) edges.push_back({w, std::min(i, j), std::max(i, j)});
    });
    std::sort(edges.begin(), edges.end());

    UnionFind uf(m + 2);
    std::vector<std::vector<std::uint32_t>> tree(m + 2);
    for (const Edge& e : edges) {
      if (!uf.unite(e.u, e.v)) continue;
      tree[e.u].push_back(e.v);
      tree[e.v].push_back(e.u);
      if (!uf.connected(side_a, side_b)) continue;

      result.r_star = e.weight;
      result.censored = e.weight > sample.margin_around(rect);
      // Path between the side nodes in the spanning forest.
      std::vector<std::uint32_t> parent(m + 2, UINT32_MAX);
      std::queue<std::uint32_t> frontier;
      frontier.push(side_a);
      parent[side_a] = side_a;
      while (!frontier.empty()) {
        const std::uint32_t u = frontier.front();
        frontier.pop();
        if (u == side_b) break;
        for (std::uint32_t v : tree[u]) {
          if (parent[v] == UINT32_MAX) {
            parent[v] = u;
            frontier.push(v);
          }
        }
      }
      for (std::uint32_t u = parent[side_b]; u != side_a; u = parent[u]) {
        result.witness.push_back(ids[grid.id(u)]);
      }
      std::reverse(result.witness.begin(), result.witness.end());
      return result;
    }
    if (search >= cover_radius) return result;
    search *= 2.0;
  }
}

double threshold_intensity(const MarkedSample& sample, const CrossingQuery& query) {
  check_query(query);
  require_margin(sample.points, query.rect, query.radius);
  const auto& centers = sample.points.centers;
  const auto ids = relevant_centers(centers, query.rect, query.radius);
  if (ids.empty()) return kInfinity;
  const CellGrid grid(gather(centers, ids), 2.0 * query.radius);
  const auto pts = grid.points();
  const auto m = static_cast<std::uint32_t>(pts.size());
  std::vector<double> level(m);
  for (std::uint32_t s = 0; s < m; ++s) level[s] = sample.levels[ids[grid.id(s)]];
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::tie(level[a], a) < std::tie(level[b], b);
  });

  const std::uint32_t side_a = m;
  const std::uint32_t side_b = m + 1;
  const SideDistance sides{query.rect, query.orientation == Orientation::horizontal};
  const double r = query.radius;
  UnionFind uf(m + 2);
  std::vector<char> present(m, 0);
  for (std::uint32_t i : order) {
    present[i] = 1;
    if (sides.near_first(pts[i], r) && sides.first(pts[i]) <= r) uf.unite(i, side_a);
    if (sides.near_second(pts[i], r) && sides.second(pts[i]) <= r) uf.unite(i, side_b);
    bool merged = false;
    grid.for_each_near(pts[i], 1, [&](std::uint32_t j) {
      if (j != i && present[j] && clipped_discs_meet(pts[i], pts[j], query.rect, r)) {
        merged |= uf.unite(i, j);
      }
    });
    (void)merged;
    if (uf.connected(side_a, side_b)) return level[i];
  }
  return kInfinity;
}

}  // namespace boolperc
