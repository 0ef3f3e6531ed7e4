#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "etgbt/error.hpp"
#include "etgbt/trigger_math.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace etgbt;
using Catch::Approx;

// Frozen from the quadrature oracle (and cross-checked at 30 digits).
constexpr double kTail1 = 0.15865525393145705;
constexpr double kTail196 = 0.024997895148220434;
constexpr double kBeta1 = 0.70887490522720679;
constexpr double kGamma196m1 = 0.049995790296440868;
constexpr double kGamma196m2 = 0.097492001545516046;
constexpr double kGamma5m1 = 5.7330314375838782e-07;

TEST_CASE("oracle reproduces the frozen constants") {
  CHECK(oracle::upper_tail(1.0) == Approx(kTail1).margin(1e-13));
  CHECK(oracle::upper_tail(1.96) == Approx(kTail196).margin(1e-13));
  CHECK(oracle::beta(1.0) == Approx(kBeta1).margin(1e-12));
  CHECK(oracle::gamma_rate(1.96, 2) == Approx(kGamma196m2).margin(1e-12));
}

TEST_CASE("gaussian tail") {
  CHECK(gaussian_tail(0.0) == 0.5);
  CHECK(std::abs(gaussian_tail(1.0) - kTail1) <= 1e-14);
  CHECK(std::abs(gaussian_tail(1.96) - kTail196) <= 1e-14);
  for (double d = 0.0; d <= 6.0; d += 0.37) {
    CHECK(std::abs(gaussian_tail(d) - oracle::upper_tail(d)) <= 1e-13);
  }
}

TEST_CASE("tail and cdf are symmetric complements") {
  for (double d = 0.0; d <= 8.0; d += 0.01) {
    CHECK(std::abs(gaussian_tail(d) - (1.0 - std_normal_cdf(d))) <= 1e-15);
    CHECK(std::abs(gaussian_tail(d) - std_normal_cdf(-d)) <= 1e-15 * std::max(1.0, 1.0 / gaussian_tail(d)) + 1e-300);
  }
}

TEST_CASE("beta attenuation") {
  CHECK(beta(0.0) == 1.0);
  CHECK(std::abs(beta(1.0) - kBeta1) <= 1e-14);
  CHECK(beta(40.0) < 1e-300);
  CHECK(beta(1e-9) == Approx(1.0).epsilon(1e-12));
  for (double d = 0.05; d <= 6.0; d += 0.29) {
    CHECK(std::abs(beta(d) - oracle::beta(d)) <= 1e-10);
  }
}

TEST_CASE("beta is strictly decreasing") {
  double prev = beta(0.0);
  for (int i = 1; i <= 10000; ++i) {
    const double b = beta(kDefaultDeltaMax * i / 10000.0);
    REQUIRE(b < prev);
    prev = b;
  }
}

TEST_CASE("expected trigger rate") {
  CHECK(std::abs(gamma_rate(1.96, 1) - kGamma196m1) <= 1e-14);
  CHECK(std::abs(gamma_rate(1.96, 2) - kGamma196m2) <= 1e-14);
  CHECK(gamma_rate(5.0, 1) == Approx(kGamma5m1).epsilon(1e-10));
  CHECK(gamma_rate(1e-12, 1) == Approx(1.0).epsilon(1e-10));
  CHECK(gamma_rate(1e-12, 3) == Approx(1.0).epsilon(1e-10));
  CHECK(gamma_rate(40.0, 2) >= 0.0);
}

TEST_CASE("trigger rate is decreasing in delta and increasing in m") {
  for (int m = 1; m <= 4; ++m) {
    double prev = 1.0 + 1e-9;
    for (int i = 1; i <= 2000; ++i) {
      const double d = kDefaultDeltaMax * i / 2000.0;
      const double g = gamma_rate(d, m);
      REQUIRE(g < prev);
      prev = g;
      if (m > 1) REQUIRE(g > gamma_rate(d, m - 1));
    }
  }
}

TEST_CASE("trigger rate obeys its Lipschitz constant") {
  for (int m : {1, 2, 3}) {
    CHECK(gamma_rate_lipschitz(m) == Approx(2.0 * m / std::sqrt(2.0 * M_PI)));
    // The derivative magnitude 2m pdf(d) (1 - 2Q)^{m-1} never exceeds the constant.
    for (double d = 1e-6; d <= 6.0; d += 0.001) {
      const double h = 1e-7;
      const double slope = std::abs(gamma_rate(d + h, m) - gamma_rate(d, m)) / h;
      REQUIRE(slope <= gamma_rate_lipschitz(m) + 1e-6);
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-9, kDefaultDeltaMax);
  for (int i = 0; i < 20000; ++i) {
    const double a = u(rng), b = u(rng);
    for (int m : {1, 2, 3}) {
      REQUIRE(std::abs(gamma_rate(a, m) - gamma_rate(b, m)) <= gamma_rate_lipschitz(m) * std::abs(a - b) + 1e-12);
    }
  }
}

TEST_CASE("normal quantile") {
  CHECK(std_normal_quantile(0.5) == Approx(0.0).margin(1e-15));
  CHECK(std::abs(std_normal_quantile(0.005) - oracle::normal_quantile(0.005)) <= 1e-9);
  CHECK(std::abs(std_normal_quantile(0.005) - (-2.5758293035489008)) <= 1e-9);
  CHECK(std::abs(std_normal_quantile(0.975) - 1.9599639845400542) <= 1e-9);
  for (double p = 1e-6; p < 1.0 - 1e-6; p += 0.0123) {
    CHECK(std::abs(std_normal_quantile(p) - oracle::normal_quantile(p)) <= 1e-9);
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1.0 - 1e-10, 1.0 - 1e-15}) {
    const double x = std_normal_quantile(p);
    const double back = p < 0.5 ? std_normal_cdf(x) : gaussian_tail(x);
    const double target = p < 0.5 ? p : 1.0 - p;
    CHECK(std::abs(back - target) <= 1e-8 * target);
  }
}

TEST_CASE("chi-square quantile") {
  CHECK(chi2_quantile(0.99, 2) == Approx(9.2103403719761827).epsilon(1e-12));
  CHECK(chi2_quantile(0.5, 2) == Approx(-2.0 * std::log(0.5)).epsilon(1e-12));
  for (double p = 0.01; p < 1.0; p += 0.049) {
    const double z = std_normal_quantile(0.5 * (1.0 + p));
    CHECK(std::abs(chi2_quantile(p, 1) - z * z) <= 1e-7);
    CHECK(chi2_quantile(p, 2) == Approx(oracle::chi2_quantile(p, 2)).epsilon(1e-8));
  }
  // Standard table values.
  CHECK(chi2_quantile(0.95, 3) == Approx(7.8147279032511765).epsilon(1e-8));
  CHECK(chi2_quantile(0.99, 5) == Approx(15.086272469388987).epsilon(1e-8));
}

TEST_CASE("invalid special-function inputs are rejected") {
  using fixtures::error_code;
  CHECK(error_code([] { chi2_quantile(0.0, 2); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { chi2_quantile(1.0, 2); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { chi2_quantile(0.5, 0); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { Threshold(0.0); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { Threshold(-1.0); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { Threshold(std::numeric_limits<double>::infinity()); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { Threshold(std::numeric_limits<double>::quiet_NaN()); }) == ErrorCode::InvalidParameter);
  CHECK(Threshold(40.0).value() == 40.0);
}
