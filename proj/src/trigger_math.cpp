#include "etgbt/trigger_math.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "etgbt/error.hpp"

namespace etgbt {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;  // 1/sqrt(2 pi)

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Acklam's rational approximation to the normal quantile, |rel err| < 1.15e-9.
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

Threshold::Threshold(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidParameter, "threshold must be positive and finite");
  }
}

double gaussian_tail(double delta) { return 0.5 * std::erfc(delta / std::numbers::sqrt2); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double beta(double delta) {
  if (delta <= 0.0) return 1.0;
  // 1 - 2 Q(delta) = erf(delta / sqrt 2), accurate for small delta where the
  // complementary form would cancel.
  const double mass = std::erf(delta / std::numbers::sqrt2);
  const double value = 2.0 * kInvSqrt2Pi * delta * std::exp(-0.5 * delta * delta) / mass;
  return value < std::numeric_limits<double>::min() ? 0.0 : value;
}

double gamma_rate(double delta, int m) {
  // 1 - (1 - 2Q)^m evaluated as -expm1(m log1p(-2Q)) to keep precision on
  // both the delta -> 0 and delta -> inf ends.
  const double two_tail = std::erfc(delta / std::numbers::sqrt2);
  if (two_tail >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(m) * std::log1p(-two_tail));
}

double gamma_rate_lipschitz(int m) { return 2.0 * m * kInvSqrt2Pi; }

double std_normal_quantile(double p) {
  if (p == 0.5) return 0.0;
  double x = acklam_quantile(p);
  // One Newton refinement; the residual Phi(x) - p is formed from whichever
  // tail avoids cancellation.
  const double e = (p < 0.5) ? std_normal_cdf(x) - p : (1.0 - p) - gaussian_tail(x);
  const double u = e / std_normal_pdf(x);
  x -= u;
  return x;
}

double chi2_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0) || dof < 1) {
    throw Error(ErrorCode::InvalidParameter, "chi2_quantile needs p in (0,1) and dof >= 1");
  }
  const double k = 0.5 * dof;
  const auto cdf = [k](double x) { return boost::math::gamma_p(k, 0.5 * x); };
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (cdf(hi) < p) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace etgbt
