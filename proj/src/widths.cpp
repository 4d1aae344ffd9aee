#include "boolperc/widths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "boolperc/distance_transform.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/spatial_hash.hpp"

namespace boolperc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_pitch(double h) {
  if (!std::isfinite(h) || h <= 0.0) throw ParameterError("grid pitch must be positive");
}

/// Number of grid intervals of pitch h covering `length`; snaps to the
/// nearest integer when length / h is one up to rounding.
Eigen::Index intervals(double length, double h) {
  const double q = length / h;
  const double r = std::round(q);
  return static_cast<Eigen::Index>(std::abs(q - r) <= 1e-9 * std::max(1.0, q) ? r : std::floor(q));
}

struct Arc {
  double start;
  double end;
};

/// Exposed arc with its endpoint directions precomputed.
struct ArcGeometry {
  Point from;
  Point to;
  bool reflex;  // longer than a half turn
};

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

/// Parts of the unit circle around `pts[i]` not inside any other disc.
std::vector<Arc> exposed_arcs(const CellGrid& grid, std::uint32_t i) {
  const Point& c = grid.point(i);
  std::vector<Arc> covered;
  bool fully_covered = false;
  grid.for_each_near(c, static_cast<int>(std::ceil(2.0 / grid.cell_size())), [&](std::uint32_t j) {
    if (j == i || fully_covered) return;
    const Point d = grid.point(j) - c;
    const double dist = d.norm();
    if (dist > 2.0) return;
    if (dist == 0.0) {
      // Coincident circles: the lower slot keeps the boundary.
      if (j < i) fully_covered = true;
      return;
    }
    const double mid = std::atan2(d.y(), d.x());
    const double half = std::acos(std::min(1.0, dist / 2.0));
    const double a = wrap_angle(mid - half);
    const double b = a + 2.0 * half;
    if (b <= kTwoPi) {
      covered.push_back({a, b});
    } else {
      covered.push_back({a, kTwoPi});
      covered.push_back({0.0, b - kTwoPi});
    }
  });
  if (fully_covered) return {};
  std::sort(covered.begin(), covered.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  std::vector<Arc> exposed;
  double cursor = 0.0;
  for (const Arc& arc : covered) {
    if (arc.start > cursor) exposed.push_back({cursor, arc.start});
    cursor = std::max(cursor, arc.end);
  }
  if (cursor < kTwoPi) exposed.push_back({cursor, kTwoPi});
  return exposed;
}

double distance_to_arc(const Point& x, const Point& center, const ArcGeometry& arc) {
  const Point v = x - center;
  const double rho = v.norm();
  if (rho == 0.0) return 1.0;
  const bool inside = arc.reflex ? !(cross(arc.to, v) > 0.0 && cross(v, arc.from) > 0.0)
                                 : cross(arc.from, v) >= 0.0 && cross(v, arc.to) >= 0.0;
  if (inside) return std::abs(1.0 - rho);
  return std::sqrt(std::min((v - arc.from).squaredNorm(), (v - arc.to).squaredNorm()));
}

}  // namespace

WidthResult vacant_width(const PointSample& sample, double n) {
  if (!(n > 0.0)) throw ParameterError("box half-side must be positive");
  const Rect box = Rect::square(n);
  WidthResult out;
  out.method = WidthMethod::exact_bottleneck;
  // Cheap exit: a vertical occupied crossing at radius 1 means no vacant
  // horizontal crossing at all.
  if (sample.margin_around(box) >= 1.0 &&
      occupied_crossing(sample, {box, Orientation::vertical, 1.0})) {
    out.width = 0.0;
    out.censored = false;
    return out;
  }
  const BottleneckResult b = bottleneck_radius(sample, box, Orientation::vertical, 1.25);
  out.width = std::isinf(b.r_star) ? kInfinity : 2.0 * std::max(b.r_star - 1.0, 0.0);
  out.censored = b.censored;
  return out;
}

WidthResult occupied_width_lower(const PointSample& sample, double n) {
  if (!(n > 1.0)) throw ParameterError("occupied width bound needs n > 1");
  auto crosses = [&](double r) {
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    return occupied_crossing(sample, {Rect::centered(n + s, n - 1.0), Orientation::horizontal, r});
  };
  WidthResult out;
  out.method = WidthMethod::exact_lower_bound;
  if (!crosses(1.0)) {
    out.width = 0.0;
    return out;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (crosses(mid) ? hi : lo) = mid;
  }
  out.width = 2.0 * std::sqrt(std::max(0.0, 1.0 - hi * hi));
  return out;
}

ScalarField occupied_distance_field(const PointSample& sample, const Rect& rect, double h) {
  check_pitch(h);
  if (!rect.valid()) throw ParameterError("field rectangle is degenerate");
  const auto pad = static_cast<Eigen::Index>(std::ceil(kFieldPadding / h - 1e-9));
  const double pad_len = static_cast<double>(pad) * h;
  const double available = sample.margin_around(rect);
  if (available < pad_len + 1.0) throw CensoringError(pad_len + 1.0, available);

  const Eigen::Index nxi = intervals(rect.width(), h) + 1;
  const Eigen::Index nyi = intervals(rect.height(), h) + 1;
  const Eigen::Index nx = nxi + 2 * pad;
  const Eigen::Index ny = nyi + 2 * pad;
  const Point origin(rect.x_min - pad_len, rect.y_min - pad_len);
  const Rect grid_rect{origin.x(), origin.x() + (nx - 1) * h, origin.y(), origin.y() + (ny - 1) * h};

  // Discs up to 3 away still clip the arcs of discs meeting the grid.
  std::vector<Point> discs;
  for (const Point& c : sample.centers) {
    if (distance_to_rect(c, grid_rect) <= 3.0) discs.push_back(c);
  }

  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> covered =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(nx, ny, false);
  for (const Point& c : discs) {
    const auto i0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil((c.x() - 1.0 - origin.x()) / h)));
    const auto i1 = std::min<Eigen::Index>(nx - 1, static_cast<Eigen::Index>(std::floor((c.x() + 1.0 - origin.x()) / h)));
    const auto j0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil((c.y() - 1.0 - origin.y()) / h)));
    const auto j1 = std::min<Eigen::Index>(ny - 1, static_cast<Eigen::Index>(std::floor((c.y() + 1.0 - origin.y()) / h)));
    for (Eigen::Index j = j0; j <= j1; ++j) {
      const double dy = origin.y() + j * h - c.y();
      for (Eigen::Index i = i0; i <= i1; ++i) {
        const double dx = origin.x() + i * h - c.x();
        if (dx * dx + dy * dy <= 1.0) covered(i, j) = true;
      }
    }
  }

  const Eigen::ArrayXXd upper = squared_edt(!covered).sqrt() * h;

  ScalarField field;
  field.origin = Point(rect.x_min, rect.y_min);
  field.pitch = h;
  field.values = upper.block(pad, pad, nxi, nyi);
  if (discs.empty()) return field;

  const CellGrid grid(discs, 1.0);
  std::vector<std::vector<ArcGeometry>> arcs(grid.size());
  for (std::uint32_t s = 0; s < grid.size(); ++s) {
    for (const Arc& arc : exposed_arcs(grid, s)) {
      arcs[s].push_back({Point(std::cos(arc.start), std::sin(arc.start)),
                         Point(std::cos(arc.end), std::sin(arc.end)), arc.end - arc.start > std::numbers::pi});
    }
  }
  const int whole = static_cast<int>(std::max(nx, ny));

  for (Eigen::Index j = 0; j < nyi; ++j) {
    for (Eigen::Index i = 0; i < nxi; ++i) {
      double& value = field.values(i, j);
      if (value == 0.0) continue;
      const Point x = field.at(i, j);
      const int k = std::isfinite(value)
                        ? static_cast<int>(std::ceil((value + 1.0) / grid.cell_size()))
                        : whole;
      double best = value;
      grid.for_each_near(x, k, [&](std::uint32_t s) {
        const Point& c = grid.point(s);
        const double reach = best + 1.0;
        if ((x - c).squaredNorm() >= reach * reach || arcs[s].empty()) return;
        for (const ArcGeometry& arc : arcs[s]) best = std::min(best, distance_to_arc(x, c, arc));
      });
      value = best;
    }
  }
  return field;
}

double vacant_distance(const Point& x, const PointSample& sample) {
  double best = kInfinity;
  for (const Point& c : sample.centers) best = std::min(best, (x - c).squaredNorm());
  return std::isinf(best) ? kInfinity : std::max(0.0, std::sqrt(best) - 1.0);
}

ScalarField vacant_distance_field(const PointSample& sample, const Rect& rect, double h) {
  check_pitch(h);
  if (!rect.valid()) throw ParameterError("field rectangle is degenerate");
  ScalarField field;
  field.origin = Point(rect.x_min, rect.y_min);
  field.pitch = h;
  const Eigen::Index nx = intervals(rect.width(), h) + 1;
  const Eigen::Index ny = intervals(rect.height(), h) + 1;
  if (sample.centers.empty()) {
    field.values = Eigen::ArrayXXd::Constant(nx, ny, kInfinity);
    return field;
  }
  field.values.resize(nx, ny);
  const CellGrid grid(sample.centers, 1.0);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      field.values(i, j) = std::max(0.0, grid.nearest(field.at(i, j)).first - 1.0);
    }
  }
  return field;
}

double widest_path(const ScalarField& field, Orientation orientation) {
  const Eigen::Index nx = field.nx();
  const Eigen::Index ny = field.ny();
  if (nx == 0 || ny == 0) throw ParameterError("empty field");
  const bool horizontal = orientation == Orientation::horizontal;
  const auto flat = [nx](Eigen::Index i, Eigen::Index j) {
    return static_cast<std::size_t>(j * nx + i);
  };

  std::vector<double> best(static_cast<std::size_t>(nx * ny), -1.0);
  std::vector<char> done(best.size(), 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  const Eigen::Index sources = horizontal ? ny : nx;
  for (Eigen::Index t = 0; t < sources; ++t) {
    const Eigen::Index i = horizontal ? 0 : t;
    const Eigen::Index j = horizontal ? t : 0;
    best[flat(i, j)] = field.values(i, j);
    heap.emplace(field.values(i, j), flat(i, j));
  }
  while (!heap.empty()) {
    const auto [value, id] = heap.top();
    heap.pop();
    if (done[id]) continue;
    done[id] = 1;
    const auto i = static_cast<Eigen::Index>(id % nx);
    const auto j = static_cast<Eigen::Index>(id / nx);
    if (horizontal ? i == nx - 1 : j == ny - 1) return value;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const Eigen::Index a = i + di;
        const Eigen::Index b = j + dj;
        if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t nb = flat(a, b);
        const double candidate = std::min(value, field.values(a, b));
        if (!done[nb] && candidate > best[nb]) {
          best[nb] = candidate;
          heap.emplace(candidate, nb);
        }
      }
    }
  }
  return 0.0;
}

WidthResult occupied_width(const PointSample& sample, double n, double h) {
  if (!(n > 0.0)) throw ParameterError("box half-side must be positive");
  check_pitch(h);
  const Rect box = Rect::square(n);
  WidthResult out;
  out.method = WidthMethod::grid;
  out.grid_error_bound = 2.0 * std::sqrt(2.0) * h;

  // A crossing path stays inside one cluster of the plane union that reaches
  // both sides, and the distance to the vacant set inside such a cluster only
  // depends on its own discs. Everything else contributes zero, so the field
  // is computed for those clusters only, on the rows they occupy.
  std::vector<Point> near;
  for (const Point& c : sample.centers) {
    if (distance_to_rect(c, box) <= kFieldPadding + 1.0) near.push_back(c);
  }
  UnionFind clusters(near.size());
  if (!near.empty()) {
    const CellGrid grid(near, 2.0);
    grid.for_each_pair([&](std::uint32_t a, std::uint32_t b) {
      if ((grid.point(a) - grid.point(b)).squaredNorm() <= 4.0) clusters.unite(grid.id(a), grid.id(b));
    });
  }
  const auto [left, right] = crossing_sides(box, Orientation::horizontal);
  std::vector<std::uint8_t> side(near.size(), 0);
  for (std::uint32_t i = 0; i < near.size(); ++i) {
    std::uint8_t& mask = side[clusters.find(i)];
    if (boundary_activation(near[i], left) <= 1.0) mask |= 1;
    if (boundary_activation(near[i], right) <= 1.0) mask |= 2;
  }

  PointSample kept;
  kept.region = sample.region;
  kept.margin = sample.margin;
  kept.intensity = sample.intensity;
  kept.seed = sample.seed;
  double y_lo = n;
  double y_hi = -n;
  for (std::uint32_t i = 0; i < near.size(); ++i) {
    if (side[clusters.find(i)] != 3) continue;
    kept.centers.push_back(near[i]);
    y_lo = std::min(y_lo, near[i].y() - 1.0);
    y_hi = std::max(y_hi, near[i].y() + 1.0);
  }
  if (kept.centers.empty()) {
    const double available = sample.margin_around(box);
    const double pad_len = std::ceil(kFieldPadding / h - 1e-9) * h;
    if (available < pad_len + 1.0) throw CensoringError(pad_len + 1.0, available);
    return out;
  }

  // Rows snapped to the lattice of the full box so node values coincide.
  const Eigen::Index rows = intervals(2.0 * n, h);
  const auto j_lo = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor((y_lo + n) / h)), 0, rows);
  const auto j_hi = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil((y_hi + n) / h)), 0, rows);
  Rect band = box;
  band.y_min = -n + static_cast<double>(j_lo) * h;
  band.y_max = j_hi == rows ? n : -n + static_cast<double>(j_hi) * h;
  if (j_hi <= j_lo) band.y_max = std::min(n, band.y_min + h);

  const ScalarField field = occupied_distance_field(kept, band, h);
  out.width = 2.0 * widest_path(field, Orientation::horizontal);
  out.censored = out.width / 2.0 > kFieldPadding;
  return out;
}

}  // namespace boolperc
