#pragma once

// Reference implementations used to derive expected values in tests. They
// deliberately avoid the library's own numerics (no erf/erfc closed forms, no
// filter module) so that agreement is evidence rather than tautology.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// P(X > delta) for X ~ N(0,1) by composite Simpson quadrature of the density.
double upper_tail(double delta);

/// 1 - Var(X | |X| <= delta), X ~ N(0,1), both moments by quadrature.
double beta(double delta);

/// 1 - (1 - 2 upper_tail(delta))^m.
double gamma_rate(double delta, int m);

/// Standard normal quantile by bisection on the quadrature CDF.
double normal_quantile(double p);

/// Chi-square quantile for 1 and 2 degrees of freedom (closed forms on top of
/// normal_quantile).
double chi2_quantile(double p, int dof);

/// Positive root of s^2 + q s - q r = 0: steady-state a posteriori variance of
/// the scalar random walk x+ = x + w observed directly.
double scalar_kf_steady_state(double q, double r);

struct SmallSystem {
  Mat A, B, C, Q, R, K;
};

struct CovPair {
  Mat sigma, lambda;
};

/// One step of the offline recursion, written with an explicit inverse of the
/// innovation covariance.
CovPair step(const SmallSystem& s, const CovPair& in, bool gamma, double delta);

/// max over all 2^T trigger sequences of max eig(Sigma_k + Lambda_k) for each
/// k = 0..T, by recursive enumeration.
std::vector<double> envelope(const SmallSystem& s, const CovPair& init, const std::vector<double>& deltas);

/// The scalar bound recursion evaluated directly from the matrices' extreme
/// eigenvalues; returns (lambda_bar + p_bar) at steps 0..T.
std::vector<double> bound_totals(const SmallSystem& s, const CovPair& init, const std::vector<double>& deltas);

}  // namespace oracle
