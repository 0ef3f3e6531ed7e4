#include "etgbt/filter.hpp"

#include <sstream>

#include "etgbt/error.hpp"

namespace etgbt {

KalmanGain kf_gain(const Matrix& prior_cov, const LinearSystem& sys) {
  KalmanGain g;
  g.S = symmetrize(sys.C * prior_cov * sys.C.transpose() + sys.R);
  const auto [lo, hi] = symmetric_eig_range(g.S);
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition) {
    std::ostringstream os;
    os << "innovation covariance eigenvalues in [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::NumericalSingularity, os.str());
  }
  // L = P C^T S^{-1}  <=>  S L^T = C P
  Eigen::LLT<Matrix> llt(g.S);
  g.L = llt.solve(sys.C * prior_cov).transpose();
  return g;
}

GaussianEstimate et_predict(const GaussianEstimate& est, const Vector& u, const LinearSystem& sys) {
  GaussianEstimate out;
  out.mean = sys.A * est.mean + sys.B * u;
  out.cov = symmetrize(sys.A * est.cov * sys.A.transpose() + sys.Q);
  out.step = est.step + 1;
  return out;
}

TriggerEvaluation evaluate_trigger(const GaussianEstimate& prior, const Vector& y, Threshold delta,
                                   const LinearSystem& sys) {
  const Matrix S = symmetrize(sys.C * prior.cov * sys.C.transpose() + sys.R);
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::CholeskyFailure, "innovation covariance is not positive definite");
  }
  TriggerEvaluation ev;
  ev.innovation = y - sys.C * prior.mean;
  ev.whitened = llt.matrixL().solve(ev.innovation);
  ev.decision.epsilon_inf_norm = ev.whitened.size() ? ev.whitened.cwiseAbs().maxCoeff() : 0.0;
  ev.decision.gamma = ev.decision.epsilon_inf_norm > delta.value();
  return ev;
}

Matrix et_posterior_cov(const Matrix& prior_cov, const KalmanGain& gain, bool gamma, double beta_value,
                        const LinearSystem& sys) {
  const double weight = gamma ? 1.0 : beta_value;
  return symmetrize(prior_cov - weight * gain.L * sys.C * prior_cov);
}

GaussianEstimate et_correct(const GaussianEstimate& prior, const TriggerDecision& decision, const Vector& z,
                            Threshold delta, const LinearSystem& sys) {
  const KalmanGain gain = kf_gain(prior.cov, sys);
  GaussianEstimate out;
  out.mean = decision.gamma ? Vector(prior.mean + gain.L * z) : prior.mean;
  out.cov = et_posterior_cov(prior.cov, gain, decision.gamma, beta(delta.value()), sys);
  out.step = prior.step;
  return out;
}

OfflineCovPair kf_expected_belief_step(const OfflineCovPair& pair, const LinearSystem& sys) {
  const Matrix prior = symmetrize(sys.A * pair.sigma * sys.A.transpose() + sys.Q);
  const KalmanGain gain = kf_gain(prior, sys);
  const Matrix info = gain.L * sys.C * prior;
  const Matrix F = sys.closed_loop();
  OfflineCovPair out;
  out.sigma = symmetrize(prior - info);
  out.lambda = symmetrize(F * pair.lambda * F.transpose() + info);
  return out;
}

OfflineCovPair et_offline_cov_step(const OfflineCovPair& pair, bool gamma, Threshold delta,
                                   const LinearSystem& sys) {
  const Matrix prior = symmetrize(sys.A * pair.sigma * sys.A.transpose() + sys.Q);
  const KalmanGain gain = kf_gain(prior, sys);
  const Matrix info = gain.L * sys.C * prior;
  const Matrix F = sys.closed_loop();
  const double weight = gamma ? 1.0 : beta(delta.value());
  OfflineCovPair out;
  out.sigma = symmetrize(prior - weight * info);
  out.lambda = gamma ? symmetrize(F * pair.lambda * F.transpose() + info)
                     : symmetrize(F * pair.lambda * F.transpose());
  return out;
}

}  // namespace etgbt
