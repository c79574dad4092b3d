#include "netprice/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "netprice/error.hpp"

namespace netprice {

namespace {

Eigen::PartialPivLU<Mat> checked_lu(const Mat& M) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "linear solve requires a non-empty square matrix");
  }
  if (!M.allFinite()) throw Error(ErrorKind::InvalidParameter, "matrix has non-finite entries");
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw Error(ErrorKind::SingularMatrix, "matrix is identically zero");
  Eigen::PartialPivLU<Mat> lu(M);
  const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (smallest < kSingularPivotTolerance * scale) {
    throw Error(ErrorKind::SingularMatrix, "pivot magnitude below relative tolerance");
  }
  return lu;
}

Mat symmetric_part(const Mat& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

bool is_singular(const Mat& M) {
  try {
    checked_lu(M);
    return false;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) return true;
    throw;
  }
}

Vec solve(const Mat& M, const Vec& b) {
  if (b.size() != M.rows()) throw Error(ErrorKind::ShapeMismatch, "right-hand side size mismatch");
  return checked_lu(M).solve(b);
}

Mat solve(const Mat& M, const Mat& B) {
  if (B.rows() != M.rows()) throw Error(ErrorKind::ShapeMismatch, "right-hand side size mismatch");
  return checked_lu(M).solve(B);
}

double max_sym_eigenvalue(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetric_part(M), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double min_sym_eigenvalue(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetric_part(M), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double spectral_radius(const Mat& M) {
  Eigen::EigenSolver<Mat> solver(M, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Vec ones(Eigen::Index n) { return Vec::Ones(n); }

}  // namespace netprice
