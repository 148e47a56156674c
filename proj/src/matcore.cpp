#include "stekf/matcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <string>

namespace stekf {

void require_finite(const Mat& M, const char* what) {
  if (!M.allFinite()) {
    throw ShapeError(std::string(what) + ": non-finite entries");
  }
}

static void require_same_shape(const Mat& V, const Mat& W, const char* what) {
  if (V.rows() != W.rows() || V.cols() != W.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch (" +
                     std::to_string(V.rows()) + "x" + std::to_string(V.cols()) +
                     " vs " + std::to_string(W.rows()) + "x" +
                     std::to_string(W.cols()) + ")");
  }
}

double frobenius_inner(const Mat& V, const Mat& W) {
  require_same_shape(V, W, "frobenius_inner");
  return V.cwiseProduct(W).sum();
}

SymEig sym_eig(const Mat& S, double sym_tol) {
  if (S.rows() != S.cols()) {
    throw ShapeError("sym_eig: matrix not square");
  }
  require_finite(S, "sym_eig");
  const double scale = S.norm();
  const double defect = (S - S.transpose()).norm();
  if (defect > sym_tol * std::max(1.0, scale)) {
    throw ShapeError("sym_eig: matrix not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Mat> solver(S);
  if (solver.info() != Eigen::Success) {
    throw NoConvergenceError("sym_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order; flip to descending.
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Mat sym_inv_sqrt(const Mat& S, double eps_rank, double sym_tol) {
  const SymEig eig = sym_eig(S, sym_tol);
  const Eigen::Index k = eig.values.size();
  if (eig.values(k - 1) <= eps_rank) {
    throw RankDeficientError("sym_inv_sqrt: matrix not full rank");
  }
  const Vec inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
}

Mat matrix_exp(const Mat& A) {
  if (A.rows() != A.cols()) {
    throw ShapeError("matrix_exp: matrix not square");
  }
  require_finite(A, "matrix_exp");
  return A.exp();
}

static ThinQr householder_thin_qr(const Mat& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  Eigen::HouseholderQR<Mat> qr(X);
  Mat Q = qr.householderQ() * Mat::Identity(n, k);
  Mat R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  // Sign convention: nonnegative R diagonal.
  for (Eigen::Index j = 0; j < k; ++j) {
    if (R(j, j) < 0.0) {
      R.row(j) = -R.row(j);
      Q.col(j) = -Q.col(j);
    }
  }
  return {std::move(Q), std::move(R)};
}

ThinQr thin_qr(const Mat& X, double eps_rank) {
  if (X.rows() < X.cols() || X.cols() < 1) {
    throw ShapeError("thin_qr: need n >= k >= 1");
  }
  require_finite(X, "thin_qr");
  ThinQr out = householder_thin_qr(X);
  const double scale = std::max(1.0, X.norm());
  for (Eigen::Index j = 0; j < out.R.cols(); ++j) {
    if (out.R(j, j) <= eps_rank * scale) {
      throw RankDeficientError("thin_qr: input not full column rank");
    }
  }
  return out;
}

ThinQr thin_qr_unchecked(const Mat& X) {
  if (X.rows() < X.cols() || X.cols() < 1) {
    throw ShapeError("thin_qr: need n >= k >= 1");
  }
  require_finite(X, "thin_qr");
  return householder_thin_qr(X);
}

}  // namespace stekf
