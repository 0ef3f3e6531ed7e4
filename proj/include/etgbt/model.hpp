#pragma once

#include <Eigen/Dense>

namespace etgbt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Discrete-time linear-Gaussian robot with a linear trajectory-tracking gain.
///
///   x_{k+1} = A x_k + B u_k + w_k,   w_k ~ N(0, Q)
///   y_k     = C x_k + v_k,           v_k ~ N(0, R)
///   u_k     = u_nom_k - K (xhat_k - x_nom_k)
struct LinearSystem {
  Matrix A;  // n x n
  Matrix B;  // n x p
  Matrix C;  // m x n
  Matrix Q;  // n x n
  Matrix R;  // m x m
  Matrix K;  // p x n

  int n() const { return static_cast<int>(A.rows()); }
  int p() const { return static_cast<int>(B.cols()); }
  int m() const { return static_cast<int>(C.rows()); }

  /// Closed-loop estimate dynamics A - BK.
  Matrix closed_loop() const { return A - B * K; }
};

/// A system that passed `validate_system`. Only constructible through it.
class ValidatedSystem {
 public:
  const LinearSystem& system() const { return sys_; }
  operator const LinearSystem&() const { return sys_; }  // NOLINT(google-explicit-constructor)

 private:
  explicit ValidatedSystem(LinearSystem sys) : sys_(std::move(sys)) {}
  friend ValidatedSystem validate_system(LinearSystem sys);

  LinearSystem sys_;
};

/// Scalar spectral bounds on the system matrices:
///   a_lo^2 I <= A A^T <= a_hi^2 I,   k_lo^2 I <= (A-BK)(A-BK)^T <= k_hi^2 I,
///   c_lo^2 I <= C C^T <= c_hi^2 I,   q_lo I <= Q <= q_hi I,   r_lo I <= R <= r_hi I.
struct ScalarBounds {
  double a_lo = 0, a_hi = 0;
  double k_lo = 0, k_hi = 0;
  double c_lo = 0, c_hi = 0;
  double q_lo = 0, q_hi = 0;
  double r_lo = 0, r_hi = 0;

  /// True when A is singular (a_lo == 0). Legal, but worth a warning.
  bool singular_dynamics() const { return a_lo <= 0.0; }

  bool operator==(const ScalarBounds&) const = default;
};

inline constexpr double kPositiveDefiniteTol = 1e-12;
inline constexpr double kRankRelTol = 1e-9;

/// Checks dimensions, symmetry and definiteness of Q and R, controllability of
/// (A, B) and observability of (A, C). Throws `Error` on the first violation.
ValidatedSystem validate_system(LinearSystem sys);

/// Extreme eigenvalues of AA^T, (A-BK)(A-BK)^T, CC^T, Q and R.
/// Throws DegenerateObservation when CC^T is singular.
ScalarBounds derive_scalar_bounds(const ValidatedSystem& sys);

/// Numerical rank with singular-value threshold rel_tol * sigma_max.
int numerical_rank(const Matrix& M, double rel_tol = kRankRelTol);

/// Min and max eigenvalue of a symmetric matrix.
std::pair<double, double> symmetric_eig_range(const Matrix& S);

/// (M + M^T) / 2
inline Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace etgbt
