#include <catch_amalgamated.hpp>

#include <random>

#include "etgbt/bounds.hpp"
#include "etgbt/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace etgbt;
using Catch::Approx;
using fixtures::error_code;

namespace {

const Matrix kSigma0 = 0.01 * Matrix::Identity(2, 2);
const Matrix kZero = Matrix::Zero(2, 2);

std::vector<Threshold> constant(double d, int T) { return std::vector<Threshold>(static_cast<std::size_t>(T), Threshold(d)); }

std::vector<double> values(const std::vector<Threshold>& ds) {
  std::vector<double> out;
  for (const Threshold& d : ds) out.push_back(d.value());
  return out;
}

}  // namespace

TEST_CASE("bound initialization") {
  BoundState b = init_bounds(kSigma0, kZero);
  CHECK(b.lambda_bar == Approx(0.0).margin(1e-18));
  CHECK(b.p_bar == Approx(0.01));
  CHECK(b.p_lo == Approx(0.01));
  CHECK(b.step == 0);

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 0.01, 0.04;
  b = init_bounds(d, kZero);
  CHECK(b.p_bar == Approx(0.04));
  CHECK(b.p_lo == Approx(0.01));
  CHECK(init_bounds(kSigma0, 0.02 * Matrix::Identity(2, 2)).lambda_bar == Approx(0.02));

  Matrix bad = kSigma0;
  bad(1, 1) = -1e-3;
  CHECK(error_code([&] { init_bounds(bad, kZero); }) == ErrorCode::NotPSD);
  CHECK(error_code([&] { init_bounds(kSigma0, bad); }) == ErrorCode::NotPSD);
}

TEST_CASE("one bound step on the 2D system") {
  const ScalarBounds sb = derive_scalar_bounds(validate_system(fixtures::system_2d()));
  const BoundState b = bound_step(init_bounds(kSigma0, kZero), sb, Threshold(1.0));
  const double be = oracle::beta(1.0);
  CHECK(b.lambda_bar == Approx(0.02 * 0.02 / (0.02 + 0.01)).epsilon(1e-13));
  CHECK(b.lambda_bar == Approx(0.013333333333333334).epsilon(1e-13));
  CHECK(b.p_bar == Approx(1.0 / (1.0 / 0.02 + be / (0.01 + (1.0 - be) * 0.02))).epsilon(1e-12));
  CHECK(b.p_bar == Approx(0.010548334596970577).epsilon(1e-10));
  CHECK(b.p_lo == Approx(0.005).epsilon(1e-14));
  CHECK(b.total() == Approx(0.023881667930303911).epsilon(1e-10));
  CHECK(b.step == 1);
}

TEST_CASE("bound step limits in the threshold") {
  const ScalarBounds sb = derive_scalar_bounds(validate_system(fixtures::system_2d()));
  const BoundState s0{0.05, 0.03, 0.01, 0};
  const BoundState wide = bound_step(s0, sb, Threshold(40.0));
  CHECK(wide.p_bar == Approx(0.03 * 1.0 + 0.01).epsilon(1e-14));
  const BoundState narrow = bound_step(s0, sb, Threshold(1e-9));
  CHECK(narrow.p_bar == Approx(1.0 / (1.0 / 0.04 + 1.0 / 0.01)).epsilon(1e-9));
  CHECK(wide.lambda_bar == narrow.lambda_bar);
}

TEST_CASE("propagation lengths and agreement with the oracle recursion") {
  const LinearSystem raw = fixtures::system_2d();
  const ScalarBounds sb = derive_scalar_bounds(validate_system(raw));
  const BoundState s0 = init_bounds(kSigma0, kZero);
  CHECK(propagate_bounds(s0, sb, {}).size() == 1);
  const std::vector<Threshold> one{Threshold(1.0)};
  const auto p1 = propagate_bounds(s0, sb, one);
  REQUIRE(p1.size() == 2);
  CHECK(p1[1] == bound_step(s0, sb, Threshold(1.0)));

  const auto ds = constant(1.0, 10);
  const auto seq = propagate_bounds(s0, sb, ds);
  const auto ref = oracle::bound_totals(fixtures::to_oracle(raw), {kSigma0, kZero}, values(ds));
  REQUIRE(seq.size() == 11);
  CHECK(seq[1].lambda_bar == Approx(0.013333333333333334).epsilon(1e-13));
  for (std::size_t k = 0; k < seq.size(); ++k) {
    CHECK(seq[k].total() == Approx(ref[k]).epsilon(1e-9));
    if (k > 0) CHECK(seq[k].lambda_bar > seq[k - 1].lambda_bar);
  }
}

TEST_CASE("diverging bounds are reported with their step") {
  const ScalarBounds sb = derive_scalar_bounds(validate_system(fixtures::scalar_system(3.0, 1.0, 1.0, 0.01, 0.01, 0.0)));
  const BoundState s0{0.0, 0.01, 0.01, 0};
  try {
    propagate_bounds(s0, sb, constant(1.0, 200));
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundDiverged);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("brute-force envelope") {
  const LinearSystem raw = fixtures::system_2d();
  const ValidatedSystem sys = validate_system(raw);
  const Matrix l0 = 0.003 * Matrix::Identity(2, 2);
  const EnvelopeResult e0 = brute_force_envelope(sys, kSigma0, l0, {}, 0);
  CHECK(e0.envelope == Approx(0.013).epsilon(1e-12));

  const std::vector<Threshold> d1{Threshold(1.0)};
  const EnvelopeResult e1 = brute_force_envelope(sys, kSigma0, kZero, d1, 1);
  const auto ref = oracle::envelope(fixtures::to_oracle(raw), {kSigma0, kZero}, {1.0});
  CHECK(e1.envelope == Approx(ref[1]).epsilon(1e-10));
  CHECK(e1.envelope <= 0.023881667930303911 + 1e-12);

  const ValidatedSystem scalar = validate_system(fixtures::scalar_system(1.0, 1.0, 1.0, 0.01, 0.01, 0.5));
  const auto ds = constant(0.8, 12);
  const EnvelopeResult e12 = brute_force_envelope(scalar, Matrix::Constant(1, 1, 0.01), Matrix::Zero(1, 1), ds, 12);
  const auto bounds = propagate_bounds(BoundState{0.0, 0.01, 0.01, 0}, derive_scalar_bounds(scalar), ds);
  REQUIRE(e12.per_step_max.size() == 13);
  for (int k = 0; k <= 12; ++k) CHECK(bounds[static_cast<std::size_t>(k)].total() - e12.per_step_max[static_cast<std::size_t>(k)] >= 0.0);

  CHECK(error_code([&] { brute_force_envelope(sys, kSigma0, kZero, constant(1.0, 21), 21); }) ==
        ErrorCode::HorizonTooLarge);
  CHECK(error_code([&] { brute_force_envelope(sys, kSigma0, kZero, constant(1.0, 3), 5); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("envelope matches the independent enumeration on random systems") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearSystem raw = fixtures::random_stable_2x2(rng);
    std::vector<double> ds(8);
    for (double& d : ds) d = ud(rng);
    std::vector<Threshold> th(ds.begin(), ds.end());
    const EnvelopeResult got = brute_force_envelope(validate_system(raw), kSigma0, kZero, th, 8);
    const auto ref = oracle::envelope(fixtures::to_oracle(raw), {kSigma0, kZero}, ds);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(got.per_step_max[k] == Approx(ref[k]).epsilon(1e-9));
  }
}

TEST_CASE("dominance report") {
  const ValidatedSystem sys = validate_system(fixtures::system_2d());
  const auto ds = constant(1.0, 10);
  const DominanceReport rep = check_bound_dominates(sys, kSigma0, kZero, ds, 10);
  CHECK(rep.pass);
  CHECK(rep.epsilon_min >= kDominanceTol);
  // Every prefix at every step: sum_{k=0}^{10} 2^k rows, sorted by (step, id).
  REQUIRE(rep.rows.size() == (1u << 11) - 1);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    REQUIRE((a.step < b.step || (a.step == b.step && a.gamma_prefix_id < b.gamma_prefix_id)));
  }
  for (const DominanceRow& r : rep.rows) {
    const std::uint64_t all_sent = (std::uint64_t{1} << r.step) - 1;
    if (r.gamma_prefix_id == all_sent) CHECK(r.epsilon_min >= 0.0);
  }
  const DominanceReport lean = check_bound_dominates(sys, kSigma0, kZero, ds, 10, false);
  CHECK(lean.rows.empty());
  CHECK(lean.epsilon_min == rep.epsilon_min);
}

TEST_CASE("a halved lambda bound is caught") {
  const ValidatedSystem sys = validate_system(fixtures::system_2d());
  const auto ds = constant(1.0, 10);
  auto bounds = propagate_bounds(init_bounds(kSigma0, kZero), derive_scalar_bounds(sys), ds);
  for (BoundState& b : bounds) b.lambda_bar *= 0.5;
  const DominanceReport rep =
      check_bound_dominates(sys, kSigma0, kZero, ds, 10, false, std::span<const BoundState>(bounds));
  CHECK_FALSE(rep.pass);
  CHECK(rep.epsilon_min < 0.0);
  CHECK(rep.worst_step > 0);
}

TEST_CASE("soundness over random systems and threshold sequences") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  std::uniform_real_distribution<double> coef(0.3, 1.2);
  std::vector<LinearSystem> systems{fixtures::system_2d()};
  for (int i = 0; i < 5; ++i) {
    const double a = coef(rng);
    systems.push_back(fixtures::scalar_system(a, 1.0, coef(rng), 0.01 * coef(rng), 0.01 * coef(rng), a - 0.5 * coef(rng)));
  }
  for (int i = 0; i < 15; ++i) systems.push_back(fixtures::random_stable_2x2(rng));
  double worst = std::numeric_limits<double>::infinity();
  for (const LinearSystem& raw : systems) {
    const int n = raw.n();
    const Matrix s0 = 0.01 * Matrix::Identity(n, n);
    const Matrix l0 = Matrix::Zero(n, n);
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<Threshold> ds;
      for (int k = 0; k < 12; ++k) ds.emplace_back(ud(rng));
      const ValidatedSystem sys = validate_system(raw);
      const EnvelopeResult env = brute_force_envelope(sys, s0, l0, ds, 12);
      const auto bounds = propagate_bounds(init_bounds(s0, l0), derive_scalar_bounds(sys), ds);
      for (std::size_t k = 0; k < bounds.size(); ++k) worst = std::min(worst, bounds[k].total() - env.per_step_max[k]);
    }
  }
  INFO("worst slack " << worst);
  CHECK(worst >= -1e-9);
}

TEST_CASE("inverse of a matrix bounded below is bounded above") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> lo(0.01, 2.0);
  for (int i = 0; i < 100; ++i) {
    Matrix G(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) G(r, c) = u(rng);
    const double x_lo = lo(rng);
    const Matrix X = G * G.transpose() + x_lo * Matrix::Identity(3, 3);
    const double min_eig = symmetric_eig_range(X).first;
    REQUIRE(min_eig >= x_lo - 1e-12);
    CHECK(symmetric_eig_range(Matrix(X.inverse())).second <= 1.0 / x_lo + 1e-12);
  }
}

TEST_CASE("covariance bound is nondecreasing in the threshold") {
  const ScalarBounds sb = derive_scalar_bounds(validate_system(fixtures::system_2d()));
  for (const BoundState s : {BoundState{0.0, 0.01, 0.01, 0}, BoundState{0.2, 0.5, 0.005, 3}}) {
    double prev = 0.0;
    for (int i = 1; i <= 5000; ++i) {
      const BoundState b = bound_step(s, sb, Threshold(6.0 * i / 5000.0));
      REQUIRE(b.p_bar >= prev);
      REQUIRE(b.lambda_bar == bound_step(s, sb, Threshold(1.0)).lambda_bar);
      prev = b.p_bar;
    }
  }
}

TEST_CASE("one-step covariance bound is Lipschitz in the threshold") {
  const ScalarBounds sb = derive_scalar_bounds(validate_system(fixtures::system_2d()));
  const BoundState s{0.0, 0.01, 0.01, 0};
  const auto max_slope = [&](int n) {
    double L = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = 0.1 + 4.9 * i / n, b = 0.1 + 4.9 * (i + 1) / n;
      L = std::max(L, std::abs(bound_step(s, sb, Threshold(b)).p_bar - bound_step(s, sb, Threshold(a)).p_bar) / (b - a));
    }
    return L;
  };
  const double coarse = max_slope(1000), fine = max_slope(100000);
  INFO("coarse " << coarse << " fine " << fine);
  CHECK(std::isfinite(fine));
  CHECK(fine == Approx(coarse).epsilon(0.01));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = ud(rng), b = ud(rng);
    REQUIRE(std::abs(bound_step(s, sb, Threshold(a)).p_bar - bound_step(s, sb, Threshold(b)).p_bar) <=
            1.01 * fine * std::abs(a - b) + 1e-15);
  }
}
