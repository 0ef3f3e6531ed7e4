#pragma once

#include "etgbt/model.hpp"
#include "etgbt/trigger_math.hpp"

namespace etgbt {

/// Online Gaussian estimate N(mean, cov) at step k.
struct GaussianEstimate {
  Vector mean;
  Matrix cov;
  int step = 0;
};

/// Offline covariance pair whose sum is the expected-belief covariance:
/// sigma is the online filter covariance, lambda the dispersion of future
/// estimates about the nominal trajectory.
struct OfflineCovPair {
  Matrix sigma;
  Matrix lambda;
};

struct TriggerDecision {
  bool gamma = false;
  double epsilon_inf_norm = 0.0;
};

struct KalmanGain {
  Matrix L;  // n x m
  Matrix S;  // innovation covariance C P C^T + R, m x m
};

inline constexpr double kMaxInnovationCondition = 1e12;

/// L = P C^T (C P C^T + R)^{-1}. Throws NumericalSingularity when cond(S) > 1e12.
KalmanGain kf_gain(const Matrix& prior_cov, const LinearSystem& sys);

/// A priori update: mean <- A mean + B u, cov <- A cov A^T + Q.
GaussianEstimate et_predict(const GaussianEstimate& est, const Vector& u, const LinearSystem& sys);

struct TriggerEvaluation {
  TriggerDecision decision;
  Vector innovation;  // z = y - C mean^-
  Vector whitened;    // eps = chol(S)^{-1} z
};

/// Whitens the innovation with the inverse lower Cholesky factor of S and
/// applies the infinity-norm rule. Throws CholeskyFailure if S is not PD.
TriggerEvaluation evaluate_trigger(const GaussianEstimate& prior, const Vector& y, Threshold delta,
                                   const LinearSystem& sys);

/// A posteriori update. gamma = 1 is the Kalman correction; gamma = 0 keeps
/// the mean and shrinks the covariance by beta(delta) L C P.
GaussianEstimate et_correct(const GaussianEstimate& prior, const TriggerDecision& decision,
                            const Vector& z, Threshold delta, const LinearSystem& sys);

/// Expected-belief recursion under an always-communicating Kalman filter.
OfflineCovPair kf_expected_belief_step(const OfflineCovPair& pair, const LinearSystem& sys);

/// Expected-belief recursion for a given trigger outcome.
OfflineCovPair et_offline_cov_step(const OfflineCovPair& pair, bool gamma, Threshold delta,
                                   const LinearSystem& sys);

/// Posterior covariance P - [gamma + (1-gamma) beta] L C P from a prior P.
Matrix et_posterior_cov(const Matrix& prior_cov, const KalmanGain& gain, bool gamma, double beta_value,
                        const LinearSystem& sys);

}  // namespace etgbt
