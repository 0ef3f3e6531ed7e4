#include "etgbt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "etgbt/error.hpp"

namespace etgbt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotControllable: return "NotControllable";
    case ErrorCode::NotObservable: return "NotObservable";
    case ErrorCode::DegenerateObservation: return "DegenerateObservation";
    case ErrorCode::NumericalSingularity: return "NumericalSingularity";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::BoundDiverged: return "BoundDiverged";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
  }
  return "Unknown";
}

namespace {

std::string shape(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

void expect_shape(const char* name, const Matrix& M, Eigen::Index rows, Eigen::Index cols) {
  if (M.rows() != rows || M.cols() != cols) {
    std::ostringstream os;
    os << name << " is " << shape(M) << ", expected " << rows << "x" << cols;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void expect_covariance(const char* name, const Matrix& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " is not symmetric");
  }
  const auto [lo, hi] = symmetric_eig_range(M);
  (void)hi;
  if (!(lo > kPositiveDefiniteTol)) {
    std::ostringstream os;
    os << name << " has minimum eigenvalue " << lo;
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
  }
}

}  // namespace

std::pair<double, double> symmetric_eig_range(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(S), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

int numerical_rank(const Matrix& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double threshold = rel_tol * sv(0);
  return static_cast<int>((sv.array() > threshold).count());
}

ValidatedSystem validate_system(LinearSystem sys) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index p = sys.B.cols();
  const Eigen::Index m = sys.C.rows();
  if (n <= 0 || p <= 0 || m <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "dimensions must be positive");
  }
  expect_shape("A", sys.A, n, n);
  expect_shape("B", sys.B, n, p);
  expect_shape("C", sys.C, m, n);
  expect_shape("Q", sys.Q, n, n);
  expect_shape("R", sys.R, m, m);
  expect_shape("K", sys.K, p, n);
  if (!sys.A.allFinite() || !sys.B.allFinite() || !sys.C.allFinite() || !sys.Q.allFinite() ||
      !sys.R.allFinite() || !sys.K.allFinite()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix entries must be finite");
  }
  expect_covariance("Q", sys.Q);
  expect_covariance("R", sys.R);

  // Kalman controllability [B, AB, ..., A^{n-1}B] and observability stacks.
  Matrix ctrb(n, n * p);
  Matrix obsv(n * m, n);
  Matrix Ak_B = sys.B;
  Matrix C_Ak = sys.C;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * p, p) = Ak_B;
    obsv.middleRows(k * m, m) = C_Ak;
    Ak_B = sys.A * Ak_B;
    C_Ak = C_Ak * sys.A;
  }
  if (numerical_rank(ctrb) < n) throw Error(ErrorCode::NotControllable, "rank of [B AB ...] below n");
  if (numerical_rank(obsv) < n) throw Error(ErrorCode::NotObservable, "rank of [C; CA; ...] below n");
  return ValidatedSystem(std::move(sys));
}

ScalarBounds derive_scalar_bounds(const ValidatedSystem& vsys) {
  const LinearSystem& sys = vsys.system();
  const auto root_range = [](const Matrix& S) {
    auto [lo, hi] = symmetric_eig_range(S);
    return std::pair{std::sqrt(std::max(lo, 0.0)), std::sqrt(std::max(hi, 0.0))};
  };
  ScalarBounds sb;
  std::tie(sb.a_lo, sb.a_hi) = root_range(sys.A * sys.A.transpose());
  const Matrix F = sys.closed_loop();
  std::tie(sb.k_lo, sb.k_hi) = root_range(F * F.transpose());
  const auto [ccl, cch] = symmetric_eig_range(sys.C * sys.C.transpose());
  if (!(ccl > 0.0) || numerical_rank(sys.C * sys.C.transpose()) < sys.m()) {
    throw Error(ErrorCode::DegenerateObservation, "C C^T is singular");
  }
  sb.c_lo = std::sqrt(ccl);
  sb.c_hi = std::sqrt(cch);
  std::tie(sb.q_lo, sb.q_hi) = symmetric_eig_range(sys.Q);
  std::tie(sb.r_lo, sb.r_hi) = symmetric_eig_range(sys.R);
  return sb;
}

}  // namespace etgbt
