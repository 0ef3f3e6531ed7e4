#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "etgbt/filter.hpp"
#include "etgbt/model.hpp"
#include "etgbt/trigger_math.hpp"

namespace etgbt {

/// Scalar recursion state bounding every trigger sequence:
/// Lambda_k <= lambda_bar I,  p_lo I <= Sigma_k <= p_bar I.
struct BoundState {
  double lambda_bar = 0.0;
  double p_bar = 0.0;
  double p_lo = 0.0;
  int step = 0;

  /// Scale of the spherical covariance bound (lambda_bar + p_bar) I.
  double total() const { return lambda_bar + p_bar; }

  bool operator==(const BoundState&) const = default;
};

/// Nominal mean plus the spherical covariance bound around it.
struct BoundedBelief {
  Vector mean;
  BoundState bound;
};

inline constexpr double kBoundDivergenceLimit = 1e18;
inline constexpr int kMaxEnumerationHorizon = 20;
inline constexpr double kDominanceTol = -1e-9;

/// lambda_bar = max eig(Lambda0), p_bar = max eig(Sigma0), p_lo = min eig(Sigma0).
BoundState init_bounds(const Matrix& sigma0, const Matrix& lambda0);

/// One step of the bound recursion for threshold delta.
/// Throws BoundDiverged when lambda_bar exceeds 1e18 or leaves the finite range.
BoundState bound_step(const BoundState& state, const ScalarBounds& sb, Threshold delta);

/// [state0, step(state0, d0), ...]; length deltas.size() + 1.
std::vector<BoundState> propagate_bounds(const BoundState& state0, const ScalarBounds& sb,
                                         std::span<const Threshold> deltas);

struct EnvelopeResult {
  double envelope = 0.0;              // max over sequences of max eig(Sigma_T + Lambda_T)
  std::vector<double> per_step_max;   // same maximum at every step 0..T
};

/// Exhaustive enumeration of all 2^T trigger sequences over deltas[0..T-1].
/// Throws HorizonTooLarge for T > 20 and InvalidParameter if deltas is short.
EnvelopeResult brute_force_envelope(const LinearSystem& sys, const Matrix& sigma0, const Matrix& lambda0,
                                    std::span<const Threshold> deltas, int horizon);

struct DominanceRow {
  int step = 0;
  std::uint64_t gamma_prefix_id = 0;  // bit j holds gamma_{j+1}
  double epsilon_min = 0.0;
};

struct DominanceReport {
  bool pass = false;
  double epsilon_min = 0.0;
  int worst_step = 0;
  std::uint64_t worst_prefix = 0;
  std::vector<DominanceRow> rows;
};

/// For every step k <= T and every trigger prefix, the margin
/// min eig((lambda_bar_k + p_bar_k) I - (Sigma_k + Lambda_k)). PASS iff the
/// global minimum is >= -1e-9. `bounds_override` replaces the recursion output
/// (used for mutation testing); it must hold T + 1 states.
DominanceReport check_bound_dominates(const ValidatedSystem& sys, const Matrix& sigma0, const Matrix& lambda0,
                                      std::span<const Threshold> deltas, int horizon, bool keep_rows = true,
                                      std::optional<std::span<const BoundState>> bounds_override = std::nullopt);

/// Bound margin for one realized covariance pair.
double bound_margin(const BoundState& bound, const OfflineCovPair& pair);

}  // namespace etgbt
