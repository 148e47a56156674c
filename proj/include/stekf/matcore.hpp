#pragma once

#include <Eigen/Dense>

#include "stekf/errors.hpp"

namespace stekf {

// Ambient linear space: dense n-by-k real matrices.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Default tolerances. Every routine that uses one takes it as a
// defaulted parameter, so callers can override per call.
namespace tol {
inline constexpr double kSymmetry = 1e-10;      // relative Frobenius
inline constexpr double kRank = 1e-12;          // smallest admissible eigenvalue / R diagonal
inline constexpr double kOrth = 1e-8;           // ||X^T X - I||_F on manifold points
inline constexpr double kOrthRepair = 1e-6;     // re-orthonormalize up to this, reject beyond
inline constexpr double kTangency = 1e-8;       // ||X^T V + V^T X||_F
inline constexpr double kLogResidual = 1e-10;   // log-map iteration residual
inline constexpr int kLogMaxIter = 100;
inline constexpr double kFrechetGrad = 1e-8;    // Frechet mean gradient norm
inline constexpr int kFrechetMaxIter = 500;
}  // namespace tol

// Throws ShapeError unless every entry of M is finite.
void require_finite(const Mat& M, const char* what);

// trace(V^T W); requires equal shapes.
double frobenius_inner(const Mat& V, const Mat& W);

inline double frobenius_norm(const Mat& V) { return V.norm(); }

struct SymEig {
  Vec values;   // descending
  Mat vectors;  // orthogonal, columns match `values`
};

// Eigendecomposition of a symmetric matrix. Rejects inputs whose
// asymmetry exceeds `sym_tol` (relative Frobenius).
SymEig sym_eig(const Mat& S, double sym_tol = tol::kSymmetry);

// (S)^(-1/2) for symmetric positive definite S. Eigenvalues at or below
// `eps_rank` raise RankDeficientError, distinct from shape errors.
Mat sym_inv_sqrt(const Mat& S, double eps_rank = tol::kRank,
                 double sym_tol = tol::kSymmetry);

// Matrix exponential of a square matrix (scaling-and-squaring, Padé).
Mat matrix_exp(const Mat& A);

struct ThinQr {
  Mat Q;  // n x k, orthonormal columns
  Mat R;  // k x k, upper triangular, nonnegative diagonal
};

// Thin QR with the sign convention diag(R) >= 0, which makes the
// factorization of a full-rank matrix unique. A diagonal entry of R at
// or below eps_rank * ||X||_F raises RankDeficientError.
ThinQr thin_qr(const Mat& X, double eps_rank = tol::kRank);

// Same factorization without the rank check; rank-deficient columns of
// Q are completed arbitrarily (still orthonormal). Internal building
// block for geodesics, where a zero normal component is legitimate.
ThinQr thin_qr_unchecked(const Mat& X);

}  // namespace stekf
