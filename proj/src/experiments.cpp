#include "boolperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "boolperc/crossing.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/rng.hpp"
#include "boolperc/sampler.hpp"
#include "boolperc/widths.hpp"

namespace boolperc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kBootstrapReplicates = 200;

const char* orientation_name(Orientation o) {
  return o == Orientation::horizontal ? "horizontal" : "vertical";
}

nlohmann::json rect_json(const Rect& r) { return {r.x_min, r.x_max, r.y_min, r.y_max}; }

std::uint64_t scale_tag(double n) { return static_cast<std::uint64_t>(std::llround(n * 1024.0)); }

void require_samples(std::int64_t samples) {
  if (samples < 1) throw ParameterError("need at least one sample");
}

void require_intensity(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("intensity must be finite and >= 0");
}

std::int64_t count_true(const std::vector<std::uint8_t>& flags) {
  std::int64_t c = 0;
  for (std::uint8_t f : flags) c += f;
  return c;
}

/// Standard deviation of `statistic` over resamples of consecutive batches.
template <typename Statistic>
double batch_bootstrap(const std::vector<double>& values, Statistic&& statistic, std::uint64_t seed) {
  const auto size = static_cast<std::int64_t>(values.size());
  if (size < 2) return kNaN;
  const std::int64_t batch = std::min(kBootstrapBatch, std::max<std::int64_t>(1, size / 20));
  const std::int64_t batches = (size + batch - 1) / batch;
  Philox4x32 rng(seed, 0);
  std::vector<double> estimates;
  std::vector<double> resample;
  for (int rep = 0; rep < kBootstrapReplicates; ++rep) {
    resample.clear();
    for (std::int64_t b = 0; b < batches; ++b) {
      const auto pick = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(batches));
      const auto first = values.begin() + pick * batch;
      resample.insert(resample.end(), first, first + std::min(batch, size - pick * batch));
    }
    estimates.push_back(statistic(resample));
  }
  return sample_stddev(estimates);
}

double interpolate_crossing(double x0, double d0, double x1, double d1) {
  return x0 + (x1 - x0) * d0 / (d0 - d1);
}

/// Mean location of the sign changes of `diff` over `grid`, ignoring exact
/// zeros; nullopt when there is none.
std::optional<std::pair<double, std::size_t>> sign_changes(const std::vector<double>& grid,
                                                          const std::vector<double>& diff) {
  double sum = 0.0;
  std::size_t count = 0;
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < diff.size(); ++k) {
    if (diff[k] == 0.0) continue;
    if (last && (diff[*last] < 0.0) != (diff[k] < 0.0)) {
      sum += interpolate_crossing(grid[*last], diff[*last], grid[k], diff[k]);
      ++count;
    }
    last = k;
  }
  if (count == 0) return std::nullopt;
  return std::make_pair(sum / static_cast<double>(count), count);
}

/// Per-batch histograms of the first grid index at or above each threshold;
/// index grid.size() collects thresholds beyond the grid.
std::vector<std::vector<std::int64_t>> threshold_histograms(const std::vector<double>& thresholds,
                                                            const std::vector<double>& grid) {
  const auto size = static_cast<std::int64_t>(thresholds.size());
  const std::int64_t batches = (size + kBootstrapBatch - 1) / kBootstrapBatch;
  std::vector<std::vector<std::int64_t>> hist(static_cast<std::size_t>(batches),
                                              std::vector<std::int64_t>(grid.size() + 1, 0));
  for (std::int64_t i = 0; i < size; ++i) {
    const double t = thresholds[static_cast<std::size_t>(i)];
    const auto k = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
    ++hist[static_cast<std::size_t>(i / kBootstrapBatch)][k];
  }
  return hist;
}

/// Crossing curve on the grid from a multiset of batch histograms.
std::vector<double> curve_from(const std::vector<std::vector<std::int64_t>>& hist,
                               const std::vector<std::size_t>& picks, std::size_t points) {
  std::vector<double> cumulative(points + 1, 0.0);
  double total = 0.0;
  for (std::size_t b : picks) {
    for (std::size_t k = 0; k <= points; ++k) cumulative[k] += static_cast<double>(hist[b][k]);
  }
  for (double c : cumulative) total += c;
  std::vector<double> curve(points);
  double running = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    running += cumulative[k];
    curve[k] = running / total;
  }
  return curve;
}

double ecdf(const std::vector<double>& sorted, double x) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) /
         static_cast<double>(sorted.size());
}

}  // namespace

const EstimateRecord& SweepResult::find(const std::string& quantity) const {
  for (const auto& r : records) {
    if (r.quantity == quantity) return r;
  }
  throw std::out_of_range("no record for quantity " + quantity);
}

EstimateRecord crossing_probability(double lambda, const Rect& rect, Orientation orientation,
                                    std::int64_t samples, std::uint64_t seed, int threads,
                                    CrossingKind kind, double margin) {
  require_samples(samples);
  require_intensity(lambda);
  if (!rect.valid()) throw ParameterError("crossing rectangle is degenerate");
  const auto hits = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(rect, margin, lambda, sample_seed(seed, static_cast<std::uint64_t>(i)));
    return kind == CrossingKind::occupied ? occupied_crossing(s, {rect, orientation, 1.0})
                                          : vacant_crossing(s, rect, orientation);
  });
  const Proportion p = proportion(count_true(hits), samples);
  EstimateRecord r;
  r.experiment = "cross-prob";
  r.lambda = lambda;
  r.n = rect.width() / 2.0;
  r.quantity = kind == CrossingKind::occupied ? "p_cross" : "p_cross_vacant";
  r.value = p.value;
  r.std_error = p.std_error;
  r.n_samples = samples;
  r.seed = seed;
  r.params = {{"rect", rect_json(rect)}, {"orientation", orientation_name(orientation)}, {"margin", margin}};
  return r;
}

std::vector<double> crossing_thresholds(const Rect& rect, Orientation orientation, double max_lambda,
                                        std::int64_t samples, std::uint64_t seed, int threads,
                                        double margin) {
  require_samples(samples);
  require_intensity(max_lambda);
  return parallel_map<double>(samples, threads, [&](std::int64_t i) {
    const MarkedSample s = sample_marked(rect, margin, max_lambda, sample_seed(seed, static_cast<std::uint64_t>(i)));
    return threshold_intensity(s, {rect, orientation, 1.0});
  });
}

LambdaCResult estimate_lambda_c(std::span<const double> n_list, std::int64_t samples,
                                std::uint64_t seed, int threads) {
  if (n_list.size() < 2) throw ParameterError("lambda_c needs at least two scales");
  require_samples(samples);
  std::vector<double> scales(n_list.begin(), n_list.end());
  std::sort(scales.begin(), scales.end());
  const double n_small = scales[scales.size() - 2];
  const double n_large = scales.back();
  if (!(n_small > 0.0) || n_small == n_large) throw ParameterError("scales must be positive and distinct");

  LambdaCResult out;
  constexpr int kPoints = 161;
  for (int k = 0; k < kPoints; ++k) out.grid.push_back(0.2 + 0.0025 * k);
  const double top = out.grid.back();

  const auto t_small = crossing_thresholds(Rect::square(n_small), Orientation::horizontal, top, samples,
                                           derive_seed(seed, scale_tag(n_small)), threads);
  const auto t_large = crossing_thresholds(Rect::square(n_large), Orientation::horizontal, top, samples,
                                           derive_seed(seed, scale_tag(n_large)), threads);
  const auto h_small = threshold_histograms(t_small, out.grid);
  const auto h_large = threshold_histograms(t_large, out.grid);

  std::vector<std::size_t> all(h_small.size());
  for (std::size_t b = 0; b < all.size(); ++b) all[b] = b;
  out.p_small = curve_from(h_small, all, out.grid.size());
  out.p_large = curve_from(h_large, all, out.grid.size());

  const auto locate = [&](const std::vector<double>& small, const std::vector<double>& large) {
    std::vector<double> diff(small.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = large[k] - small[k];
    return sign_changes(out.grid, diff);
  };
  const auto estimate = locate(out.p_small, out.p_large);
  if (!estimate) throw RangeError("crossing curves do not intersect on [0.2, 0.6]");
  out.crossings = estimate->second;

  Philox4x32 rng(derive_seed(seed, 0xb0075742ull), 0);
  std::vector<double> replicates;
  std::vector<std::size_t> pick_small(all.size());
  std::vector<std::size_t> pick_large(all.size());
  for (int rep = 0; rep < kBootstrapReplicates; ++rep) {
    for (auto& b : pick_small) b = static_cast<std::size_t>(rng() % all.size());
    for (auto& b : pick_large) b = static_cast<std::size_t>(rng() % all.size());
    const auto r = locate(curve_from(h_small, pick_small, out.grid.size()),
                          curve_from(h_large, pick_large, out.grid.size()));
    if (r) replicates.push_back(r->first);
  }

  EstimateRecord& rec = out.record;
  rec.experiment = "lambda-c";
  rec.lambda = estimate->first;
  rec.n = n_large;
  rec.quantity = "lambda_c";
  rec.value = estimate->first;
  rec.std_error = replicates.size() >= 2 ? sample_stddev(replicates) : kNaN;
  rec.n_samples = samples;
  rec.seed = seed;
  rec.params = {{"n_list", scales},
                {"grid", {0.2, top, 0.0025}},
                {"crossings", out.crossings},
                {"bootstrap_batch", kBootstrapBatch},
                {"bootstrap_replicates", kBootstrapReplicates},
                {"bootstrap_valid", replicates.size()}};
  return out;
}

// The grid path dips below the true width where it squeezes through the
// lens between two discs; the exact lower bound is never above the truth.
WidthResult occupied_width_estimate(const PointSample& s, double n, double pitch) {
  WidthResult w = occupied_width(s, n, pitch);
  w.width = std::max(w.width, occupied_width_lower(s, n).width);
  return w;
}

ConditionalWidths conditional_widths(double lambda, double n, WidthKind which, std::int64_t max_draws,
                                     std::uint64_t seed, const WidthOptions& options) {
  require_samples(max_draws);
  require_intensity(lambda);
  if (!(n > 0.0)) throw ParameterError("scale must be positive");
  const double pitch = options.pitch > 0.0 ? options.pitch : default_pitch(n);
  const Rect box = Rect::square(n);

  struct Draw {
    bool accepted = false;
    bool censored = false;
    double width = 0.0;
  };
  ConditionalWidths out;
  out.cap = 2.0 * (options.margin - 1.0);
  // Draw i depends only on i, so the chunk size only affects wasted work.
  const std::int64_t chunk = 4 * static_cast<std::int64_t>(resolve_threads(options.threads));
  for (std::int64_t start = 0; start < max_draws; start += chunk) {
    const std::int64_t count = std::min(chunk, max_draws - start);
    const auto draws = parallel_map<Draw>(count, options.threads, [&](std::int64_t j) {
      const auto index = static_cast<std::uint64_t>(start + j);
      const PointSample s = sample_padded(box, options.margin, lambda, sample_seed(seed, index));
      Draw d;
      if (which == WidthKind::occupied) {
        if (!occupied_crossing(s, {box, Orientation::horizontal, 1.0})) return d;
        const WidthResult w = occupied_width_estimate(s, n, pitch);
        d = {true, w.censored, w.width};
      } else {
        const WidthResult w = vacant_width(s, n);
        if (!(w.width > 0.0)) return d;
        d = {true, w.censored || std::isinf(w.width), w.width};
      }
      return d;
    });
    for (std::int64_t j = 0; j < count; ++j) {
      const Draw& d = draws[static_cast<std::size_t>(j)];
      ++out.draws;
      if (!d.accepted) continue;
      out.widths.push_back(d.censored ? out.cap : d.width);
      out.censored += d.censored;
      if (options.target_accepted > 0 && static_cast<std::int64_t>(out.widths.size()) >= options.target_accepted) {
        return out;
      }
    }
  }
  return out;
}

SweepResult width_distribution(double lambda, double n, WidthKind which, std::int64_t samples,
                               std::uint64_t seed, const WidthOptions& options) {
  const ConditionalWidths cw = conditional_widths(lambda, n, which, samples, seed, options);
  const double pitch = options.pitch > 0.0 ? options.pitch : default_pitch(n);
  nlohmann::json params = {{"which", which == WidthKind::occupied ? "occupied" : "vacant"},
                           {"margin", options.margin},
                           {"max_draws", samples},
                           {"target_accepted", options.target_accepted},
                           {"censor_cap", cw.cap}};
  if (which == WidthKind::occupied) params["pitch"] = pitch;

  SweepResult out;
  const auto accepted = static_cast<std::int64_t>(cw.widths.size());
  const auto record = [&](const std::string& quantity, double value, double se, std::int64_t count) {
    EstimateRecord r;
    r.experiment = "width-dist";
    r.lambda = lambda;
    r.n = n;
    r.quantity = quantity;
    r.value = value;
    r.std_error = se;
    r.n_samples = count;
    r.seed = seed;
    r.params = params;
    out.records.push_back(std::move(r));
  };
  const Proportion rate = proportion(accepted, cw.draws);
  record("accept_rate", rate.value, rate.std_error, cw.draws);
  record("censored", static_cast<double>(cw.censored), 0.0, accepted);
  if (accepted > 0) {
    for (const auto& [name, q] : {std::pair{"q10", 0.1}, std::pair{"q50", 0.5}, std::pair{"q90", 0.9}}) {
      const double level = q;
      const double se = batch_bootstrap(cw.widths, [level](const std::vector<double>& v) { return quantile(v, level); },
                                        derive_seed(seed, 0x9a11ull + static_cast<std::uint64_t>(q * 100)));
      record(name, quantile(cw.widths, q), se, accepted);
    }
  }
  return out;
}

TwoSampleCheck coupling_identity_check(double lambda, double a, double n, std::int64_t samples,
                                       std::uint64_t seed, int threads) {
  require_samples(samples);
  require_intensity(lambda);
  if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("a must be >= 0");
  if (!(n > 0.0)) throw ParameterError("scale must be positive");
  const Rect box = Rect::square(n);
  const std::uint64_t width_seed = derive_seed(seed, 1);
  const auto narrow = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, kDefaultMargin, lambda, sample_seed(width_seed, static_cast<std::uint64_t>(i)));
    return vacant_width(s, n).width <= 2.0 * a;
  });
  const double scale = 1.0 + a;
  const EstimateRecord crossing = crossing_probability(lambda * scale * scale, Rect::square(n / scale),
                                                       Orientation::horizontal, samples, derive_seed(seed, 2), threads);
  TwoSampleCheck out;
  out.first = proportion(count_true(narrow), samples);
  out.second = proportion(std::llround(crossing.value * static_cast<double>(samples)), samples);
  out.z = pooled_z(out.first, out.second);
  return out;
}

TwoSampleCheck occupied_bound_check(double lambda, double a, double n, std::int64_t samples,
                                    std::uint64_t seed, int threads, double pitch) {
  require_samples(samples);
  require_intensity(lambda);
  if (!(a >= 0.0 && a < 1.0)) throw ParameterError("a must lie in [0, 1)");
  if (!(n > 1.0)) throw ParameterError("scale must exceed 1");
  const double h = pitch > 0.0 ? pitch : default_pitch(n);
  const Rect box = Rect::square(n);
  const std::uint64_t width_seed = derive_seed(seed, 1);
  const auto wide = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, kDefaultMargin, lambda, sample_seed(width_seed, static_cast<std::uint64_t>(i)));
    if (!occupied_crossing(s, {box, Orientation::horizontal, 1.0})) return false;
    return occupied_width_estimate(s, n, h).width > 2.0 * a;
  });
  const double r = std::sqrt(1.0 - a * a);
  const EstimateRecord crossing =
      crossing_probability(lambda * r * r, Rect::centered((n + a) / r, (n - 1.0) / r), Orientation::horizontal,
                           samples, derive_seed(seed, 2), threads);
  TwoSampleCheck out;
  out.first = proportion(count_true(wide), samples);
  out.second = proportion(std::llround(crossing.value * static_cast<double>(samples)), samples);
  const double z = pooled_z(out.first, out.second);
  out.z = out.first.value >= out.second.value ? z : -z;
  return out;
}

EstimateRecord characteristic_length(double lambda, double delta, double n_max, std::int64_t samples,
                                     std::uint64_t seed, double lambda_c, int threads) {
  require_samples(samples);
  require_intensity(lambda);
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(n_max >= 1.0)) throw ParameterError("n_max must be >= 1");
  const bool supercritical = lambda >= lambda_c;
  const CrossingKind kind = supercritical ? CrossingKind::occupied : CrossingKind::vacant;

  EstimateRecord out;
  out.experiment = "char-length";
  out.lambda = lambda;
  out.n = n_max;
  out.quantity = "L_delta";
  out.value = kInfinity;
  out.n_samples = samples;
  out.seed = seed;
  out.params = {{"delta", delta},
                {"lambda_c", lambda_c},
                {"branch", supercritical ? "occupied" : "vacant"}};
  nlohmann::json sweep = nlohmann::json::array();
  for (double n = 1.0; n <= n_max; n *= 2.0) {
    const EstimateRecord p = crossing_probability(lambda, Rect::square(n), Orientation::horizontal, samples,
                                                  derive_seed(seed, scale_tag(n)), threads, kind);
    sweep.push_back({n, p.value});
    if (p.value >= 1.0 - delta) {
      out.value = n;
      break;
    }
  }
  out.params["sweep"] = sweep;
  return out;
}

WindowResult near_critical_window_check(double n, std::span<const double> c_grid, std::int64_t samples,
                                        std::uint64_t seed, double lambda_c, double alpha, int threads) {
  require_samples(samples);
  if (!(n > 0.0) || !(alpha > 0.0) || !(lambda_c > 0.0)) throw ParameterError("invalid window parameters");
  if (c_grid.empty()) throw ParameterError("empty C grid");
  std::vector<double> cs(c_grid.begin(), c_grid.end());
  std::sort(cs.begin(), cs.end());
  if (cs.front() < 0.0) throw ParameterError("C values must be >= 0");

  const Rect easy = Rect::centered(n, 2.0 * n);
  const Rect hard = Rect::centered(2.0 * n, n);
  const double stability = 0.1 * alpha;

  auto sub = crossing_thresholds(easy, Orientation::horizontal, lambda_c + stability, samples,
                                 derive_seed(seed, 1), threads);
  std::sort(sub.begin(), sub.end());

  // The hard rectangle needs thresholds up to lambda_c + C alpha; grow the
  // covered range through the grid until the 0.75 level is reached.
  std::vector<double> super;
  double covered = 0.0;
  std::size_t next = 0;
  while (true) {
    const double c_top = std::max(cs[next], 0.1);
    super = crossing_thresholds(hard, Orientation::horizontal, lambda_c + c_top * alpha, samples,
                                derive_seed(seed, 2), threads);
    std::sort(super.begin(), super.end());
    covered = c_top;
    if (ecdf(super, lambda_c + cs[next] * alpha) >= 0.75 || next == cs.size() - 1) break;
    next = std::min(cs.size() - 1, 2 * next + 1);
  }

  WindowResult out;
  out.c_sub = kInfinity;
  out.c_super = kInfinity;
  const auto add = [&](const std::string& quantity, double lambda, double value, double se, nlohmann::json params) {
    EstimateRecord r;
    r.experiment = "window-check";
    r.lambda = lambda;
    r.n = n;
    r.quantity = quantity;
    r.value = value;
    r.std_error = se;
    r.n_samples = samples;
    r.seed = seed;
    params["lambda_c"] = lambda_c;
    params["alpha"] = alpha;
    r.params = std::move(params);
    out.sweep.records.push_back(std::move(r));
  };
  const double count = static_cast<double>(samples);
  const auto se_of = [count](double p) { return std::sqrt(p * (1.0 - p) / count); };
  for (double c : cs) {
    const double lo = lambda_c - c * alpha;
    const double p_sub = lo < 0.0 ? 0.0 : ecdf(sub, lo);
    add("p_cross_n_2n", lo, p_sub, se_of(p_sub), {{"C", c}});
    if (p_sub <= 0.25) out.c_sub = std::min(out.c_sub, c);
    if (c <= covered) {
      const double hi = lambda_c + c * alpha;
      const double p_super = ecdf(super, hi);
      add("p_cross_2n_n", hi, p_super, se_of(p_super), {{"C", c}});
      if (p_super >= 0.75) out.c_super = std::min(out.c_super, c);
    }
  }
  const auto shift = [&](const std::vector<double>& sorted) {
    const double mid = ecdf(sorted, lambda_c);
    return std::max(std::abs(ecdf(sorted, lambda_c + stability) - mid),
                    std::abs(ecdf(sorted, std::max(0.0, lambda_c - stability)) - mid));
  };
  out.max_shift = std::max(shift(sub), shift(super));
  out.stable = out.max_shift <= 0.1;
  add("c_sub", lambda_c, out.c_sub, 0.0, nlohmann::json::object());
  add("c_super", lambda_c, out.c_super, 0.0, nlohmann::json::object());
  add("max_shift", lambda_c, out.max_shift, 0.0, {{"window", stability}});
  return out;
}

SlopeFit scaling_fit(std::span<const double> n_values, std::span<const double> medians) {
  const auto k = static_cast<Eigen::Index>(n_values.size());
  if (k < 3 || n_values.size() != medians.size()) throw ParameterError("scaling fit needs >= 3 matching points");
  Eigen::MatrixXd design(k, 2);
  Eigen::VectorXd y(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double n = n_values[static_cast<std::size_t>(i)];
    const double m = medians[static_cast<std::size_t>(i)];
    if (!(n > 0.0) || !(m > 0.0) || !std::isfinite(m)) throw ParameterError("scaling fit needs positive values");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(n);
    y(i) = std::log(m);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd residual = y - design * beta;
  const double sigma2 = residual.squaredNorm() / static_cast<double>(k - 2);
  const Eigen::Matrix2d cov = sigma2 * (design.transpose() * design).inverse();
  return {beta(1), beta(0), std::sqrt(std::max(0.0, cov(1, 1)))};
}

FkgResult fkg_statistic(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.empty() || a.size() != b.size()) throw ParameterError("indicator sequences must match and be nonempty");
  const auto count = static_cast<double>(a.size());
  FkgResult out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.p_h += a[i];
    out.p_v += b[i];
    out.p_hv += a[i] & b[i];
  }
  out.p_h /= count;
  out.p_v /= count;
  out.p_hv /= count;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double psi = ((a[i] & b[i]) - out.p_hv) - out.p_v * (a[i] - out.p_h) - out.p_h * (b[i] - out.p_v);
    ss += psi * psi;
  }
  out.std_error = a.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
  const double diff = out.p_hv - out.p_h * out.p_v;
  if (out.std_error > 0.0) {
    out.z = diff / out.std_error;
  } else {
    out.z = diff == 0.0 ? 0.0 : std::copysign(kInfinity, diff);
  }
  return out;
}

FkgResult fkg_check(double lambda, double n, std::int64_t samples, std::uint64_t seed, int threads) {
  require_samples(samples);
  require_intensity(lambda);
  const Rect box = Rect::square(n);
  const auto both = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, kDefaultMargin, lambda, sample_seed(seed, static_cast<std::uint64_t>(i)));
    const bool h = occupied_crossing(s, {box, Orientation::horizontal, 1.0});
    const bool v = occupied_crossing(s, {box, Orientation::vertical, 1.0});
    return static_cast<std::uint8_t>(h | (v << 1));
  });
  std::vector<std::uint8_t> h(both.size());
  std::vector<std::uint8_t> v(both.size());
  for (std::size_t i = 0; i < both.size(); ++i) {
    h[i] = both[i] & 1;
    v[i] = (both[i] >> 1) & 1;
  }
  return fkg_statistic(h, v);
}

RrrResult rrr_check(double big_r, double r, std::int64_t samples, std::uint64_t seed, double lambda,
                    int threads) {
  require_samples(samples);
  require_intensity(lambda);
  if (!(r >= 1.0 && big_r >= r)) throw ParameterError("need 1 <= r <= R");
  const Rect square = Rect::square(big_r);
  const Rect long_rect = Rect::centered(big_r + r, big_r);
  const auto both = parallel_map<std::uint8_t>(samples, threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(long_rect, kDefaultMargin, lambda, sample_seed(seed, static_cast<std::uint64_t>(i)));
    const bool sq = occupied_crossing(s, {square, Orientation::horizontal, 1.0});
    const bool lg = occupied_crossing(s, {long_rect, Orientation::horizontal, 1.0});
    return static_cast<std::uint8_t>(sq | (lg << 1));
  });
  RrrResult out;
  std::vector<double> diffs(both.size());
  for (std::size_t i = 0; i < both.size(); ++i) {
    const int sq = both[i] & 1;
    const int lg = (both[i] >> 1) & 1;
    out.p_square += sq;
    out.p_long += lg;
    diffs[i] = sq - lg;
  }
  const auto count = static_cast<double>(samples);
  out.p_square /= count;
  out.p_long /= count;
  out.diff = out.p_square - out.p_long;
  out.std_error = sample_stddev(diffs) / std::sqrt(count);
  out.c_hat = out.diff * big_r / r;
  out.min_batch_diff = kInfinity;
  for (std::size_t start = 0; start < diffs.size(); start += kBootstrapBatch) {
    const std::size_t stop = std::min(diffs.size(), start + static_cast<std::size_t>(kBootstrapBatch));
    double sum = 0.0;
    for (std::size_t i = start; i < stop; ++i) sum += diffs[i];
    out.min_batch_diff = std::min(out.min_batch_diff, sum / static_cast<double>(stop - start));
  }
  return out;
}

}  // namespace boolperc
