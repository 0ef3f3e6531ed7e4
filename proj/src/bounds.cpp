#include "etgbt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "etgbt/error.hpp"

namespace etgbt {

namespace {

void expect_psd(const char* name, const Matrix& M) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw Error(ErrorCode::NotPSD, std::string(name) + " must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::NotPSD, std::string(name) + " is not symmetric");
  }
  if (symmetric_eig_range(M).first < -1e-10) {
    throw Error(ErrorCode::NotPSD, std::string(name) + " has a negative eigenvalue");
  }
}

// Depth-first walk over every trigger prefix; `visit(step, prefix_id, pair)`
// is called for the root and for every node at depth 1..T.
void enumerate_prefixes(const LinearSystem& sys, const OfflineCovPair& root, std::span<const Threshold> deltas,
                        int horizon, const std::function<void(int, std::uint64_t, const OfflineCovPair&)>& visit) {
  if (horizon < 0 || horizon > kMaxEnumerationHorizon) {
    std::ostringstream os;
    os << "horizon " << horizon << " outside [0, " << kMaxEnumerationHorizon << "]";
    throw Error(ErrorCode::HorizonTooLarge, os.str());
  }
  if (static_cast<int>(deltas.size()) < horizon) {
    throw Error(ErrorCode::InvalidParameter, "fewer thresholds than horizon steps");
  }
  struct Frame {
    OfflineCovPair pair;
    int step;
    std::uint64_t id;
  };
  std::vector<Frame> stack;
  stack.push_back({root, 0, 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    visit(f.step, f.id, f.pair);
    if (f.step == horizon) continue;
    const Threshold d = deltas[static_cast<std::size_t>(f.step)];
    // Push gamma = 1 first so gamma = 0 is expanded first; order is cosmetic.
    stack.push_back({et_offline_cov_step(f.pair, true, d, sys), f.step + 1, f.id | (std::uint64_t{1} << f.step)});
    stack.push_back({et_offline_cov_step(f.pair, false, d, sys), f.step + 1, f.id});
  }
}

}  // namespace

BoundState init_bounds(const Matrix& sigma0, const Matrix& lambda0) {
  expect_psd("sigma0", sigma0);
  expect_psd("lambda0", lambda0);
  if (sigma0.rows() != lambda0.rows()) {
    throw Error(ErrorCode::NotPSD, "sigma0 and lambda0 differ in size");
  }
  BoundState s;
  const auto [sl, sh] = symmetric_eig_range(sigma0);
  s.lambda_bar = std::max(0.0, symmetric_eig_range(lambda0).second);
  s.p_bar = std::max(0.0, sh);
  s.p_lo = std::max(0.0, sl);
  s.step = 0;
  return s;
}

BoundState bound_step(const BoundState& state, const ScalarBounds& sb, Threshold delta) {
  const double b = beta(delta.value());
  const double a_hi2 = sb.a_hi * sb.a_hi;
  const double a_lo2 = sb.a_lo * sb.a_lo;
  const double c_hi2 = sb.c_hi * sb.c_hi;
  const double c_lo2 = sb.c_lo * sb.c_lo;

  const double prior_hi = state.p_bar * a_hi2 + sb.q_hi;
  const double prior_lo = state.p_lo * a_lo2 + sb.q_lo;

  BoundState next;
  next.step = state.step + 1;
  next.lambda_bar =
      sb.k_hi * sb.k_hi * state.lambda_bar + c_hi2 * prior_hi * prior_hi / (c_lo2 * prior_lo + sb.r_lo);
  next.p_bar = 1.0 / (1.0 / prior_hi + b * c_lo2 / (sb.r_hi + (1.0 - b) * c_hi2 * prior_hi));
  next.p_lo = 1.0 / (1.0 / sb.q_lo + c_hi2 / sb.r_lo);

  if (!std::isfinite(next.lambda_bar) || !std::isfinite(next.p_bar) || next.lambda_bar > kBoundDivergenceLimit) {
    std::ostringstream os;
    os << "lambda_bar = " << next.lambda_bar << " at step " << next.step;
    throw Error(ErrorCode::BoundDiverged, os.str());
  }
  return next;
}

std::vector<BoundState> propagate_bounds(const BoundState& state0, const ScalarBounds& sb,
                                         std::span<const Threshold> deltas) {
  std::vector<BoundState> out;
  out.reserve(deltas.size() + 1);
  out.push_back(state0);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    try {
      out.push_back(bound_step(out.back(), sb, deltas[i]));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "at index " << i << ": " << e.what();
      throw Error(ErrorCode::BoundDiverged, os.str());
    }
  }
  return out;
}

EnvelopeResult brute_force_envelope(const LinearSystem& sys, const Matrix& sigma0, const Matrix& lambda0,
                                    std::span<const Threshold> deltas, int horizon) {
  EnvelopeResult res;
  res.per_step_max.assign(static_cast<std::size_t>(std::max(horizon, 0) + 1),
                          -std::numeric_limits<double>::infinity());
  enumerate_prefixes(sys, {sigma0, lambda0}, deltas, horizon,
                     [&](int step, std::uint64_t, const OfflineCovPair& pair) {
                       const double top = symmetric_eig_range(pair.sigma + pair.lambda).second;
                       auto& slot = res.per_step_max[static_cast<std::size_t>(step)];
                       slot = std::max(slot, top);
                     });
  res.envelope = res.per_step_max.back();
  return res;
}

double bound_margin(const BoundState& bound, const OfflineCovPair& pair) {
  const Matrix total = pair.sigma + pair.lambda;
  const Matrix gap = bound.total() * Matrix::Identity(total.rows(), total.cols()) - total;
  return symmetric_eig_range(gap).first;
}

DominanceReport check_bound_dominates(const ValidatedSystem& vsys, const Matrix& sigma0, const Matrix& lambda0,
                                      std::span<const Threshold> deltas, int horizon, bool keep_rows,
                                      std::optional<std::span<const BoundState>> bounds_override) {
  const LinearSystem& sys = vsys.system();
  if (horizon < 0 || horizon > kMaxEnumerationHorizon) {
    throw Error(ErrorCode::HorizonTooLarge, "enumeration horizon must be in [0, 20]");
  }
  std::vector<BoundState> computed;
  std::span<const BoundState> bounds;
  if (bounds_override) {
    if (static_cast<int>(bounds_override->size()) < horizon + 1) {
      throw Error(ErrorCode::InvalidParameter, "bound override shorter than horizon + 1");
    }
    bounds = *bounds_override;
  } else {
    const ScalarBounds sb = derive_scalar_bounds(vsys);
    computed = propagate_bounds(init_bounds(sigma0, lambda0), sb, deltas.first(static_cast<std::size_t>(horizon)));
    bounds = computed;
  }

  DominanceReport rep;
  rep.epsilon_min = std::numeric_limits<double>::infinity();
  enumerate_prefixes(sys, {sigma0, lambda0}, deltas, horizon,
                     [&](int step, std::uint64_t id, const OfflineCovPair& pair) {
                       const double eps = bound_margin(bounds[static_cast<std::size_t>(step)], pair);
                       if (keep_rows) rep.rows.push_back({step, id, eps});
                       if (eps < rep.epsilon_min) {
                         rep.epsilon_min = eps;
                         rep.worst_step = step;
                         rep.worst_prefix = id;
                       }
                     });
  if (keep_rows) {
    std::sort(rep.rows.begin(), rep.rows.end(), [](const DominanceRow& a, const DominanceRow& b) {
      return a.step != b.step ? a.step < b.step : a.gamma_prefix_id < b.gamma_prefix_id;
    });
  }
  rep.pass = rep.epsilon_min >= kDominanceTol;
  return rep;
}

}  // namespace etgbt
