#include "boolperc/arms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "boolperc/crossing.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/rng.hpp"

namespace boolperc {

bool is_pivotal(const PointSample& sample, const Rect& rect, const Point& x) {
  const CrossingQuery query{rect, Orientation::horizontal, 1.0};
  if (occupied_crossing(sample, query)) return false;
  return occupied_crossing(sample.with_center(x), query);
}

namespace {

enum Cell : std::uint8_t { kOutside = 0, kOccupied = 1, kVacant = 2 };

struct Component {
  bool inner = false;
  bool outer = false;
};

}  // namespace

bool four_arm_annulus(const PointSample& sample, const ArmQuery& query) {
  const double r = query.r_inner;
  const double big_r = query.r_outer;
  const double h = query.pitch;
  if (!(r > 0.0) || !(big_r >= r) || !std::isfinite(big_r)) {
    throw ParameterError("annulus needs 0 < r_inner <= r_outer");
  }
  if (!(h > 0.0)) throw ParameterError("grid pitch must be positive");
  if (h > r / 4.0) throw ParameterError("grid pitch too coarse for the inner radius");
  if (r == big_r) return true;
  const Rect hull = Rect::square(big_r);
  const double available = sample.margin_around(hull);
  if (available < 1.0) throw CensoringError(1.0, available);

  const auto m = static_cast<std::ptrdiff_t>(std::ceil(2.0 * big_r / h));
  const auto center_of = [&](std::ptrdiff_t k) { return -big_r + (static_cast<double>(k) + 0.5) * h; };
  const auto flat = [m](std::ptrdiff_t i, std::ptrdiff_t j) { return static_cast<std::size_t>(j * m + i); };

  std::vector<std::uint8_t> state(static_cast<std::size_t>(m * m), kOutside);
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const double rho = std::hypot(center_of(i), center_of(j));
      if (rho >= r && rho <= big_r) state[flat(i, j)] = kVacant;
    }
  }
  for (const Point& c : sample.centers) {
    if (c.norm() > big_r + 1.0 || c.norm() < r - 1.0) continue;
    const auto lo = [&](double v) { return std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil((v - 1.0 + big_r) / h - 0.5))); };
    const auto hi = [&](double v) { return std::min<std::ptrdiff_t>(m - 1, static_cast<std::ptrdiff_t>(std::floor((v + 1.0 + big_r) / h - 0.5))); };
    for (std::ptrdiff_t j = lo(c.y()); j <= hi(c.y()); ++j) {
      const double dy = center_of(j) - c.y();
      for (std::ptrdiff_t i = lo(c.x()); i <= hi(c.x()); ++i) {
        const double dx = center_of(i) - c.x();
        std::uint8_t& s = state[flat(i, j)];
        if (s != kOutside && dx * dx + dy * dy <= 1.0) s = kOccupied;
      }
    }
  }

  // Label components by flood fill and record which ring boundaries they reach.
  std::vector<std::int32_t> label(state.size(), -1);
  std::vector<Component> components;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < state.size(); ++start) {
    if (state[start] == kOutside || label[start] >= 0) continue;
    const std::uint8_t kind = state[start];
    const bool diagonal = kind == kOccupied;
    const auto id = static_cast<std::int32_t>(components.size());
    Component comp;
    label[start] = id;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::size_t cell = stack.back();
      stack.pop_back();
      const auto i = static_cast<std::ptrdiff_t>(cell % static_cast<std::size_t>(m));
      const auto j = static_cast<std::ptrdiff_t>(cell / static_cast<std::size_t>(m));
      const double rho = std::hypot(center_of(i), center_of(j));
      comp.inner = comp.inner || rho < r + h;
      comp.outer = comp.outer || rho > big_r - h;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((di == 0 && dj == 0) || (!diagonal && di != 0 && dj != 0)) continue;
          const std::ptrdiff_t a = i + di;
          const std::ptrdiff_t b = j + dj;
          if (a < 0 || b < 0 || a >= m || b >= m) continue;
          const std::size_t nb = flat(a, b);
          if (state[nb] == kind && label[nb] < 0) {
            label[nb] = id;
            stack.push_back(nb);
          }
        }
      }
    }
    components.push_back(comp);
  }

  struct RingCell {
    double angle;
    std::uint8_t kind;
  };
  std::vector<RingCell> ring;
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const std::size_t cell = flat(i, j);
      if (state[cell] == kOutside) continue;
      const double x = center_of(i);
      const double y = center_of(j);
      if (std::hypot(x, y) >= r + h) continue;
      const Component& comp = components[static_cast<std::size_t>(label[cell])];
      if (comp.inner && comp.outer) ring.push_back({std::atan2(y, x), state[cell]});
    }
  }
  std::sort(ring.begin(), ring.end(), [](const RingCell& a, const RingCell& b) { return a.angle < b.angle; });

  std::vector<std::uint8_t> runs;
  for (const RingCell& c : ring) {
    if (runs.empty() || runs.back() != c.kind) runs.push_back(c.kind);
  }
  if (runs.size() > 1 && runs.front() == runs.back()) runs.pop_back();
  return runs.size() >= 4;
}

Pi4Estimate estimate_pi4(double lambda, double n, std::int64_t samples, Pi4Method method,
                         std::uint64_t seed, int threads, double pitch) {
  if (samples < 1) throw ParameterError("need at least one sample");
  if (!(n > 0.0)) throw ParameterError("scale must be positive");
  const Rect box = Rect::square(n);
  const ArmQuery query{1.0, n, pitch};
  const auto hits = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, kArmMargin, lambda, sample_seed(seed, static_cast<std::uint64_t>(i)));
    return method == Pi4Method::pivotal ? is_pivotal(s, box, Point::Zero()) : four_arm_annulus(s, query);
  });
  std::int64_t count = 0;
  for (std::uint8_t hit : hits) count += hit;
  Pi4Estimate out;
  out.method = method;
  out.n_samples = samples;
  out.value = static_cast<double>(count) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(samples));
  return out;
}

AlphaEstimate alpha_n(const Pi4Estimate& pi4, double n) {
  if (!(pi4.value > 0.0)) throw UndefinedError("alpha_n needs a positive four-arm estimate");
  if (!(n > 0.0)) throw ParameterError("scale must be positive");
  const double n2 = n * n;
  return {1.0 / (pi4.value * n2), pi4.std_error / (pi4.value * pi4.value * n2)};
}

RussoResult russo_check(double lambda, double n, double dlambda, std::int64_t samples,
                        std::uint64_t seed, int threads) {
  if (!(dlambda > 0.0)) throw ParameterError("dlambda must be positive");
  if (!(lambda >= 0.0) || samples < 1 || !(n > 0.0)) throw ParameterError("invalid russo parameters");
  const Rect box = Rect::square(n);
  const double lo = lambda - dlambda;
  const double hi = lambda + dlambda;

  const std::uint64_t lhs_seed = derive_seed(seed, 1);
  const auto inside = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const MarkedSample s = sample_marked(box, kArmMargin, hi, sample_seed(lhs_seed, static_cast<std::uint64_t>(i)));
    const double t = threshold_intensity(s, {box, Orientation::horizontal, 1.0});
    return t > lo && t <= hi;
  });

  const std::uint64_t rhs_seed = derive_seed(seed, 2);
  const Rect reach = box.dilated(1.0);
  const auto pivotal = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const std::uint64_t si = sample_seed(rhs_seed, static_cast<std::uint64_t>(i));
    Philox4x32 rng(si, 2);
    const Point x(reach.x_min + reach.width() * rng.uniform(), reach.y_min + reach.height() * rng.uniform());
    return is_pivotal(sample_padded(box, kArmMargin, lambda, si), box, x);
  });

  const auto mean = [](const std::vector<std::uint8_t>& v) {
    std::int64_t c = 0;
    for (std::uint8_t b : v) c += b;
    return static_cast<double>(c) / static_cast<double>(v.size());
  };
  const double q = mean(inside);
  const double p = mean(pivotal);
  const double count = static_cast<double>(samples);
  RussoResult out;
  out.lhs = q / (2.0 * dlambda);
  out.lhs_error = std::sqrt(q * (1.0 - q) / count) / (2.0 * dlambda);
  out.rhs = reach.area() * p;
  out.rhs_error = reach.area() * std::sqrt(p * (1.0 - p) / count);
  const double se = std::hypot(out.lhs_error, out.rhs_error);
  out.z = se > 0.0 ? std::abs(out.lhs - out.rhs) / se : (out.lhs == out.rhs ? 0.0 : kInfinity);
  return out;
}

}  // namespace boolperc
