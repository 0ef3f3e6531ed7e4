#pragma once

namespace etgbt {

inline constexpr double kDefaultDeltaMax = 5.0;

/// Triggering threshold on the whitened innovation, in standard deviations.
/// Strictly positive and finite; planners additionally clamp to their range.
class Threshold {
 public:
  explicit Threshold(double delta);
  double value() const { return delta_; }
  bool operator==(const Threshold&) const = default;

 private:
  double delta_;
};

/// Standard normal upper tail: integral of the N(0,1) density over [delta, inf).
double gaussian_tail(double delta);

/// Covariance-reduction attenuation applied when no measurement is sent:
/// (2/sqrt(2 pi)) delta exp(-delta^2/2) / (1 - 2 tail(delta)), with beta(0) = 1.
double beta(double delta);

/// Expected per-step trigger probability for an m-dimensional measurement,
/// 1 - (1 - 2 tail(delta))^m.
double gamma_rate(double delta, int m);

/// Supremum of |d gamma_rate / d delta| over delta > 0: 2m / sqrt(2 pi).
double gamma_rate_lipschitz(int m);

/// Inverse standard normal CDF for p in (0, 1).
double std_normal_quantile(double p);

/// Standard normal CDF.
double std_normal_cdf(double x);

/// Inverse CDF of the chi-square distribution with `dof` degrees of freedom.
double chi2_quantile(double p, int dof);

}  // namespace etgbt
