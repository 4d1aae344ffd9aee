#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <vector>

#include "boolperc/crossing.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/rng.hpp"
#include "boolperc/sampler.hpp"

using namespace boolperc;

TEST_SUITE("rng") {
  TEST_CASE("philox4x32-10 known answer for zero key and counter") {
    Philox4x32 g(0, 0);
    CHECK(g() == 0xe169c58d6627e8d5ull);
    CHECK(g() == 0x9b00dbd8bc57ac4cull);
  }

  TEST_CASE("streams and seeds are independent of draw order") {
    Philox4x32 a(42, 7);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 10; ++i) first.push_back(a());
    Philox4x32 b(42, 7);
    for (int i = 0; i < 10; ++i) CHECK(b() == first[static_cast<std::size_t>(i)]);
    Philox4x32 c(42, 8);
    CHECK(c() != first[0]);
    Philox4x32 d(43, 7);
    CHECK(d() != first[0]);
  }

  TEST_CASE("uniform draws stay in range") {
    Philox4x32 g(1, 2);
    for (int i = 0; i < 100000; ++i) {
      const double u = g.uniform();
      const double v = g.uniform_open();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      REQUIRE(v > 0.0);
      REQUIRE(v < 1.0);
    }
  }

  TEST_CASE("derived seeds differ per tag") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(sample_seed(5, 3) == derive_seed(5, 3));
  }
}

namespace {

// Kolmogorov-Smirnov statistic against U(0, 1).
double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double m = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::max(static_cast<double>(i + 1) / m - u[i], u[i] - static_cast<double>(i) / m));
  }
  return d;
}

double poisson_pmf(int k, double mean) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

bool same_bytes(const PointSample& a, const PointSample& b) {
  return a.centers.size() == b.centers.size() &&
         std::memcmp(a.centers.data(), b.centers.data(), a.centers.size() * sizeof(Point)) == 0;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("zero intensity gives an empty sample") {
    const PointSample s = sample_poisson(Rect::square(10), 0.0, 99);
    CHECK(s.size() == 0);
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(sample_poisson(Rect::square(1), -1.0, 1), ParameterError);
    CHECK_THROWS_AS(sample_poisson(Rect::square(1), std::nan(""), 1), ParameterError);
    CHECK_THROWS_AS(sample_poisson(Rect{0, 0, 0, 1}, 1.0, 1), ParameterError);
    const PointSample s = sample_poisson(Rect::square(1), 1.0, 1);
    CHECK_THROWS_AS(rescale_sample(s, 0.0), ParameterError);
  }

  TEST_CASE("replay is bit exact and points lie in the region") {
    const Rect region{-3.0, 5.0, 1.0, 2.5};
    const PointSample a = sample_poisson(region, 3.7, 1234);
    const PointSample b = sample_poisson(region, 3.7, 1234);
    CHECK(same_bytes(a, b));
    CHECK(a.seed == 1234);
    for (const Point& c : a.centers) CHECK(region.contains(c));
    CHECK_FALSE(same_bytes(a, sample_poisson(region, 3.7, 1235)));
  }

  TEST_CASE("mean count within three standard errors at intensity 100") {
    const int seeds = 10000;
    double sum = 0.0;
    for (int i = 0; i < seeds; ++i) {
      sum += static_cast<double>(sample_poisson(Rect{0, 1, 0, 1}, 100.0, sample_seed(11, i)).size());
    }
    const double mean = sum / seeds;
    CHECK(std::abs(mean - 100.0) < 3.0 * std::sqrt(100.0 / seeds));
  }

  TEST_CASE("x coordinates pass Kolmogorov-Smirnov at the 1% level") {
    std::vector<double> u;
    for (int i = 0; u.size() < 100000; ++i) {
      for (const Point& c : sample_poisson(Rect{0, 1, 0, 1}, 100.0, sample_seed(21, i)).centers) u.push_back(c.x());
    }
    u.resize(100000);
    // Asymptotic 1% critical value 1.628 / sqrt(m).
    CHECK(ks_uniform(u) < 1.628 / std::sqrt(1e5));
  }

  TEST_CASE("counts pass chi-square at the 1% level") {
    for (const double mean : {4.0, 40.0}) {
      CAPTURE(mean);
      const int seeds = 10000;
      std::map<int, int> hist;
      for (int i = 0; i < seeds; ++i) {
        ++hist[static_cast<int>(sample_poisson(Rect{0, 1, 0, 1}, mean, sample_seed(31, i)).size())];
      }
      // Bins with expected count >= 20, tails merged.
      const int lo = static_cast<int>(mean - 3.0 * std::sqrt(mean));
      const int hi = static_cast<int>(mean + 3.0 * std::sqrt(mean));
      double chi2 = 0.0;
      int bins = 0;
      double tail_obs = 0.0;
      double tail_exp = 0.0;
      for (int k = 0; k <= 10 * static_cast<int>(mean) + 50; ++k) {
        const double expected = seeds * poisson_pmf(k, mean);
        const double observed = hist.count(k) ? hist[k] : 0;
        if (k < std::max(lo, 0) || k > hi) {
          tail_obs += observed;
          tail_exp += expected;
          continue;
        }
        chi2 += (observed - expected) * (observed - expected) / expected;
        ++bins;
      }
      chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
      ++bins;
      const int dof = bins - 1;
      // Wilson-Hilferty 99% quantile of chi-square.
      const double t = 1.0 - 2.0 / (9.0 * dof) + 2.326 * std::sqrt(2.0 / (9.0 * dof));
      CHECK(chi2 < dof * t * t * t);
    }
  }

  TEST_CASE("marked sample thinning matches level order") {
    const MarkedSample m = sample_marked(Rect::square(5), 4.0, 0.8, 17);
    const PointSample half = m.at_intensity(0.4);
    std::size_t expected = 0;
    for (double level : m.levels) {
      CHECK(level >= 0.0);
      CHECK(level <= 0.8);
      expected += level <= 0.4;
    }
    CHECK(half.size() == expected);
    CHECK(half.intensity == doctest::Approx(0.4));
    CHECK(m.at_intensity(0.8).size() == m.points.size());
  }

  TEST_CASE("rescale identity and linear map") {
    const PointSample s = sample_poisson(Rect::square(3), 1.0, 5);
    const PointSample same = rescale_sample(s, 1.0);
    CHECK(same_bytes(s, same));

    PointSample one;
    one.centers = {Point(2.0, 2.0)};
    one.intensity = 0.5;
    one.region = Rect::square(4);
    one.margin = 2.0;
    const PointSample half = rescale_sample(one, 2.0);
    CHECK(half.centers[0].x() == 1.0);
    CHECK(half.centers[0].y() == 1.0);
    CHECK(half.intensity == doctest::Approx(2.0));
    CHECK(half.region == Rect::square(2));
  }

  TEST_CASE("crossing is invariant under joint rescaling") {
    const Rect rect = Rect::centered(6.0, 4.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
      const double r = 0.6 + 0.8 * (i % 7) / 6.0;
      const PointSample s = sample_padded(rect, 4.0, 0.35 / (r * r) * 1.0, sample_seed(41, i));
      const bool direct = occupied_crossing(s, {rect, Orientation::horizontal, r});
      const bool scaled = occupied_crossing(rescale_sample(s, r), {rect.shrunk(r), Orientation::horizontal, 1.0});
      CHECK(direct == scaled);
      ++checked;
    }
    CHECK(checked == 1000);
  }
}
