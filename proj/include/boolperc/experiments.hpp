#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "boolperc/geometry.hpp"
#include "boolperc/sampler.hpp"
#include "boolperc/stats.hpp"
#include "boolperc/widths.hpp"

namespace boolperc {

/// Reference critical intensity used when no fresh estimate is supplied.
inline constexpr double kLambdaCReference = 0.3591;

/// Default padding of every sampled window beyond its query rectangle.
inline constexpr double kDefaultMargin = 4.0;

/// One Monte Carlo estimate together with everything needed to replay it.
struct EstimateRecord {
  std::string experiment;
  double lambda = 0.0;
  double n = 0.0;
  std::string quantity;
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
};

struct SweepResult {
  std::vector<EstimateRecord> records;
  std::optional<double> fitted_slope;
  std::optional<double> slope_error;

  /// First record with the given quantity name; throws std::out_of_range.
  const EstimateRecord& find(const std::string& quantity) const;
};

enum class CrossingKind { occupied, vacant };

/// Binomial estimate of P[cross] for the occupied (radius 1) or vacant set.
EstimateRecord crossing_probability(double lambda, const Rect& rect, Orientation orientation,
                                    std::int64_t samples, std::uint64_t seed, int threads = 1,
                                    CrossingKind kind = CrossingKind::occupied,
                                    double margin = kDefaultMargin);

/**
 * Crossing thresholds of `rect` for `samples` marked realizations with levels
 * in [0, max_lambda]: entry i is the intensity at which sample i first
 * crosses (+inf if never). The empirical CDF at any lambda <= max_lambda is
 * the crossing probability curve, with all intensities coupled.
 */
std::vector<double> crossing_thresholds(const Rect& rect, Orientation orientation, double max_lambda,
                                        std::int64_t samples, std::uint64_t seed, int threads = 1,
                                        double margin = kDefaultMargin);

struct LambdaCResult {
  EstimateRecord record;
  std::vector<double> grid;
  std::vector<double> p_small;  ///< crossing curve at the second largest scale
  std::vector<double> p_large;  ///< crossing curve at the largest scale
  std::size_t crossings = 0;    ///< sign changes of p_large - p_small on the grid
};

/**
 * Critical intensity from the intersection of the square-crossing curves at
 * the two largest scales, on the grid 0.2, 0.2025, ..., 0.6. Intersections
 * come from linear interpolation between adjacent grid points where the
 * difference changes sign; several intersections are averaged. The error is
 * a bootstrap over batches of samples. Throws RangeError when the curves do
 * not cross on the grid.
 */
LambdaCResult estimate_lambda_c(std::span<const double> n_list, std::int64_t samples,
                                std::uint64_t seed, int threads = 1);

enum class WidthKind { occupied, vacant };

/**
 * Occupied width used by the experiments: the grid widest path, raised to
 * the exact chain lower bound when that is larger. Both stay within the
 * grid error bound of the true width.
 */
WidthResult occupied_width_estimate(const PointSample& sample, double n, double pitch);

/// Widths conditioned on their crossing event by rejection.
struct ConditionalWidths {
  std::vector<double> widths;  ///< accepted draws in index order, censored ones at the cap
  std::int64_t draws = 0;
  std::int64_t censored = 0;
  double cap = 0.0;
};

struct WidthOptions {
  double pitch = 0.0;  ///< occupied grid pitch; 0 selects default_pitch(n)
  double margin = kDefaultMargin;
  /// Stop once this many draws were accepted (0: use every draw).
  std::int64_t target_accepted = 0;
  int threads = 1;
};

/**
 * Draw up to `max_draws` samples of [-n, n]^2 and keep the widths of those
 * with a crossing of the matching kind (occupied crossing for w_n, vacant
 * width > 0 for w*_n). Censored or infinite widths are right-censored at
 * 2 (margin - 1). Draw i depends only on (seed, i) and accepted draws are
 * kept in index order, so the result does not depend on the worker count.
 */
ConditionalWidths conditional_widths(double lambda, double n, WidthKind which, std::int64_t max_draws,
                                     std::uint64_t seed, const WidthOptions& options = {});

/// Quantiles 10/50/90 of the conditional widths plus acceptance and
/// censoring counts.
SweepResult width_distribution(double lambda, double n, WidthKind which, std::int64_t samples,
                               std::uint64_t seed, const WidthOptions& options = {});

struct TwoSampleCheck {
  Proportion first;
  Proportion second;
  double z = 0.0;
};

/// P[w*_n <= 2a] at lambda against P[cross(n / (1 + a))] at lambda (1 + a)^2,
/// independent seeds, pooled z.
TwoSampleCheck coupling_identity_check(double lambda, double a, double n, std::int64_t samples,
                                       std::uint64_t seed, int threads = 1);

/// P[w_n > 2a] at lambda against the crossing probability of
/// [-(n + a), n + a] x [-(n - 1), n - 1] rescaled by 1/sqrt(1 - a^2) at
/// intensity lambda (1 - a^2). The first should not fall below the second;
/// z is signed (first - second) / pooled error.
TwoSampleCheck occupied_bound_check(double lambda, double a, double n, std::int64_t samples,
                                    std::uint64_t seed, int threads = 1, double pitch = 0.0);

/// Smallest n in 1, 2, 4, ... <= n_max whose dominant crossing probability
/// (occupied above lambda_c, vacant below) reaches 1 - delta; +inf otherwise.
EstimateRecord characteristic_length(double lambda, double delta, double n_max, std::int64_t samples,
                                     std::uint64_t seed, double lambda_c = kLambdaCReference,
                                     int threads = 1);

struct WindowResult {
  SweepResult sweep;
  double c_sub = 0.0;    ///< smallest C with P[cross(n, 2n)] <= 0.25 at lambda_c - C alpha
  double c_super = 0.0;  ///< smallest C with P[cross(2n, n)] >= 0.75 at lambda_c + C alpha
  double max_shift = 0.0;  ///< largest change of either curve within 0.1 alpha of lambda_c
  bool stable = false;     ///< max_shift <= 0.1
};

/// Crossing probabilities of the easy and hard rectangles at
/// lambda_c -/+ C alpha_n, from coupled thresholds.
WindowResult near_critical_window_check(double n, std::span<const double> c_grid, std::int64_t samples,
                                        std::uint64_t seed, double lambda_c, double alpha,
                                        int threads = 1);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
};

/// Least squares fit of log(median) against log(n); needs >= 3 positive points.
SlopeFit scaling_fit(std::span<const double> n_values, std::span<const double> medians);

struct FkgResult {
  double p_h = 0.0;
  double p_v = 0.0;
  double p_hv = 0.0;
  double std_error = 0.0;  ///< of p_hv - p_h p_v
  double z = 0.0;          ///< (p_hv - p_h p_v) / std_error; a violation is z < -3
};

/// Covariance statistic for two indicator sequences over the same draws,
/// with a delta-method error.
FkgResult fkg_statistic(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Horizontal against vertical occupied crossing of [-n, n]^2.
FkgResult fkg_check(double lambda, double n, std::int64_t samples, std::uint64_t seed, int threads = 1);

struct RrrResult {
  double p_square = 0.0;  ///< P[cross(R)]
  double p_long = 0.0;    ///< P[cross(R + r, R)]
  double diff = 0.0;
  double std_error = 0.0;
  double c_hat = 0.0;  ///< diff * R / r
  double min_batch_diff = 0.0;
};

/// P[cross(R)] - P[cross(R + r, R)] at lambda from common samples.
RrrResult rrr_check(double big_r, double r, std::int64_t samples, std::uint64_t seed,
                    double lambda = kLambdaCReference, int threads = 1);

}  // namespace boolperc
