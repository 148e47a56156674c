#include "stekf/stiefel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

namespace stekf {

namespace {

// ||X^T X - I_k||_F
double orth_defect(const Mat& X) {
  const Eigen::Index k = X.cols();
  return (X.transpose() * X - Mat::Identity(k, k)).norm();
}

bool same_base(const StiefelPoint& a, const StiefelPoint& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.matrix() - b.matrix()).norm() <= 1e-12 * std::sqrt(double(a.cols()));
}

// Principal logarithm of an orthogonal (hence normal) matrix via its
// unitary diagonalization. Eigenvalues within `angle_margin` of -1 sit
// on the boundary of the principal branch and raise CutLocusError.
Mat log_orthogonal(const Mat& M, double angle_margin = 1e-6) {
  using CMat = Eigen::MatrixXcd;
  Eigen::ComplexEigenSolver<CMat> solver(M.cast<std::complex<double>>());
  if (solver.info() != Eigen::Success) {
    throw NoConvergenceError("log_orthogonal: eigensolver failed");
  }
  const Eigen::Index m = M.rows();
  Eigen::VectorXcd d(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double theta = std::arg(solver.eigenvalues()(i));
    if (std::numbers::pi - std::abs(theta) < angle_margin) {
      throw CutLocusError(
          "log map: rotation angle at the principal-branch boundary "
          "(point at or beyond the cut locus)");
    }
    d(i) = std::complex<double>(0.0, theta);
  }
  const CMat& W = solver.eigenvectors();
  const CMat L = W * d.asDiagonal() * W.inverse();
  const Mat Lr = L.real();
  return 0.5 * (Lr - Lr.transpose());
}

}  // namespace

StiefelPoint::StiefelPoint(Mat X) : m_(std::move(X)) {
  if (m_.rows() < m_.cols() || m_.cols() < 1) {
    throw ShapeError("StiefelPoint: need n >= k >= 1");
  }
  require_finite(m_, "StiefelPoint");
  const double defect = orth_defect(m_);
  if (defect <= tol::kOrth) {
    return;
  }
  if (defect <= tol::kOrthRepair) {
    m_ = project_to_stiefel(m_).matrix();
    return;
  }
  throw ShapeError("StiefelPoint: columns not orthonormal");
}

double StiefelPoint::orthonormality_defect() const { return orth_defect(m_); }

TangentVector::TangentVector(StiefelPoint base, Mat dir)
    : base_(std::move(base)), dir_(std::move(dir)) {
  if (dir_.rows() != base_.rows() || dir_.cols() != base_.cols()) {
    throw ShapeError("TangentVector: direction shape does not match base");
  }
  require_finite(dir_, "TangentVector");
  const Mat B = base_.matrix().transpose() * dir_;
  if ((B + B.transpose()).norm() > tol::kTangency * std::max(1.0, dir_.norm())) {
    throw ShapeError("TangentVector: X^T V not skew-symmetric");
  }
}

ManifoldSpec::ManifoldSpec(int n, int k, double maxvar, std::string source,
                           long samples, std::uint64_t seed)
    : n(n),
      k(k),
      maxvar(maxvar),
      maxvar_source(std::move(source)),
      maxvar_samples(samples),
      maxvar_seed(seed) {
  if (n < k || k < 1) {
    throw ShapeError("ManifoldSpec: need n >= k >= 1");
  }
  if (dim() <= 0) {
    throw ShapeError("ManifoldSpec: manifold dimension must be positive");
  }
  if (!(maxvar > 0.0)) {
    throw VarianceRangeError("ManifoldSpec: maximal scalar variance must be positive");
  }
}

StiefelPoint project_to_stiefel(const Mat& X, double eps_rank) {
  if (X.rows() < X.cols() || X.cols() < 1) {
    throw ShapeError("project_to_stiefel: need n >= k >= 1");
  }
  require_finite(X, "project_to_stiefel");
  Mat gram = X.transpose() * X;
  gram = 0.5 * (gram + gram.transpose());
  Mat inv_sqrt;
  try {
    inv_sqrt = sym_inv_sqrt(gram, eps_rank);
  } catch (const RankDeficientError&) {
    throw RankDeficientError("project_to_stiefel: projection undefined for "
                             "rank-deficient input");
  }
  return StiefelPoint(X * inv_sqrt, StiefelPoint::already_orthonormal_tag{});
}

TangentVector tangent_project(const StiefelPoint& X, const Mat& W) {
  if (W.rows() != X.rows() || W.cols() != X.cols()) {
    throw ShapeError("tangent_project: shape mismatch");
  }
  require_finite(W, "tangent_project");
  const Mat B = X.matrix().transpose() * W;
  const Mat sym = 0.5 * (B + B.transpose());
  return TangentVector(X, W - X.matrix() * sym);
}

double canonical_inner(const StiefelPoint& X, const TangentVector& V,
                       const TangentVector& W) {
  if (!same_base(V.base(), X) || !same_base(W.base(), X)) {
    throw ShapeError("canonical_inner: tangent vectors not based at X");
  }
  const Mat XtV = X.matrix().transpose() * V.dir();
  const Mat XtW = X.matrix().transpose() * W.dir();
  return frobenius_inner(V.dir(), W.dir()) - 0.5 * frobenius_inner(XtV, XtW);
}

double canonical_norm(const TangentVector& V) {
  const double g = canonical_inner(V.base(), V, V);
  return std::sqrt(std::max(0.0, g));
}

StiefelPoint exp_map(const StiefelPoint& X, const TangentVector& V, double t) {
  if (!same_base(V.base(), X)) {
    throw ShapeError("exp_map: tangent vector not based at X");
  }
  const Eigen::Index k = X.cols();
  const Mat& Xm = X.matrix();

  Mat A = Xm.transpose() * V.dir();
  A = 0.5 * (A - A.transpose());
  const Mat K = V.dir() - Xm * A;
  const ThinQr qr = thin_qr_unchecked(K);

  // Geodesic of the canonical metric (Edelman, Arias & Smith 1998):
  // gamma(t) = [X Q] expm(t [[A, -R^T], [R, 0]]) [[I_k], [0]].
  Mat block = Mat::Zero(2 * k, 2 * k);
  block.topLeftCorner(k, k) = A;
  block.topRightCorner(k, k) = -qr.R.transpose();
  block.bottomLeftCorner(k, k) = qr.R;
  const Mat E = matrix_exp(t * block);

  const Mat Y = Xm * E.topLeftCorner(k, k) + qr.Q * E.block(k, 0, k, k);
  return project_to_stiefel(Y);
}

namespace {

// Deterministic unit vector orthogonal to the single column of x.
Mat antipodal_direction(const Mat& x) {
  const Eigen::Index n = x.rows();
  Mat best;
  double best_norm = -1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Mat e = Mat::Zero(n, 1);
    e(j, 0) = 1.0;
    Mat u = e - x * (x.transpose() * e);
    const double nu = u.norm();
    if (nu > best_norm + 1e-12) {
      best_norm = nu;
      best = u / nu;
    }
  }
  return best;
}

// Algebraic iteration for the canonical-metric logarithm
// (Zimmermann 2017): complete [[M],[N]] to an SO(2k) matrix, then
// rotate its free block until the lower-right block of the matrix
// logarithm vanishes.
TangentVector log_algebraic(const StiefelPoint& X, const StiefelPoint& Y,
                            const LogOptions& opts) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  const Mat& Xm = X.matrix();
  const Mat& Ym = Y.matrix();

  const Mat M = Xm.transpose() * Ym;
  const Mat K = Ym - Xm * M;

  if (K.norm() < 1e-12 * std::sqrt(double(k))) {
    // Y = X M exactly: the geodesic stays in the fiber {X R}.
    if (k == 1 && M(0, 0) < 0.0) {
      // Antipodal sphere points: the direction is not unique but the
      // arc length is pi; return a deterministic representative.
      return TangentVector(X, std::numbers::pi * antipodal_direction(Xm));
    }
    return TangentVector(X, Xm * log_orthogonal(M));
  }

  const ThinQr qr = thin_qr_unchecked(K);  // Y = X M + Q N

  Mat stacked(2 * k, k);
  stacked << M, qr.R;
  Eigen::HouseholderQR<Mat> full(stacked);
  const Mat completion =
      (full.householderQ() * Mat::Identity(2 * k, 2 * k)).rightCols(k);

  Mat V(2 * k, 2 * k);
  V.leftCols(k) = stacked;
  V.rightCols(k) = completion;
  if (V.determinant() < 0.0) {
    V.col(2 * k - 1) *= -1.0;
  }

  double best_residual = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Mat L = log_orthogonal(V);
    const Mat C = L.bottomRightCorner(k, k);
    const double residual = C.norm();
    if (residual <= opts.residual_tol) {
      const Mat A = L.topLeftCorner(k, k);
      const Mat B = L.block(k, 0, k, k);
      return TangentVector(X, Xm * A + qr.Q * B);
    }
    if (residual >= 0.999 * best_residual) {
      if (++stagnant >= 8) {
        throw CutLocusError("log map: residual stagnation near the cut locus");
      }
    } else {
      stagnant = 0;
    }
    best_residual = std::min(best_residual, residual);
    V.rightCols(k) = V.rightCols(k) * matrix_exp(-C);
  }
  throw NoConvergenceError("log map: no convergence within iteration cap");
}

// Chord-initialized shooting: robust for pairs beyond the algebraic
// iteration's working range, at the cost of more exp evaluations.
TangentVector log_shooting(const StiefelPoint& X, const StiefelPoint& Y,
                           const LogOptions& opts) {
  const double endpoint_tol = 1e-9 * std::sqrt(double(X.cols()));
  Mat V = tangent_project(X, Y.matrix() - X.matrix()).dir();

  double step = 1.0;
  double err = std::numeric_limits<double>::infinity();
  const int cap = std::max(300, opts.max_iter);
  for (int iter = 0; iter < cap; ++iter) {
    const StiefelPoint E = exp_map(X, TangentVector(X, V));
    const Mat D = Y.matrix() - E.matrix();
    const double new_err = D.norm();
    if (new_err < endpoint_tol) {
      return TangentVector(X, V);
    }
    if (new_err >= err) {
      step *= 0.5;
      if (step < 1e-8) break;
    } else {
      err = new_err;
      step = std::min(1.0, step * 1.3);
    }
    const Mat residual_at_end = tangent_project(E, D).dir();
    const Mat correction = tangent_project(X, residual_at_end).dir();
    V += step * correction;
  }
  throw NoConvergenceError("log map: shooting fallback did not converge");
}

}  // namespace

TangentVector log_map(const StiefelPoint& X, const StiefelPoint& Y,
                      const LogOptions& opts) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw ShapeError("log_map: points on different manifolds");
  }
  try {
    return log_algebraic(X, Y, opts);
  } catch (const NoConvergenceError&) {
    if (!opts.shooting_fallback) throw;
  }
  return log_shooting(X, Y, opts);
}

double geodesic_distance(const StiefelPoint& X, const StiefelPoint& Y,
                         const LogOptions& opts) {
  const TangentVector v = log_map(X, Y, opts);
  return canonical_norm(v);
}

StiefelPoint sample_uniform(int n, int k, Rng& rng) {
  if (n < k || k < 1) {
    throw ShapeError("sample_uniform: need n >= k >= 1");
  }
  for (;;) {
    Mat G(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        G(i, j) = rng.normal();
      }
    }
    try {
      return StiefelPoint(thin_qr(G).Q);
    } catch (const RankDeficientError&) {
      // measure-zero draw; resample
    }
  }
}

StiefelPoint sample_uniform(const ManifoldSpec& spec, Rng& rng) {
  return sample_uniform(spec.n, spec.k, rng);
}

}  // namespace stekf
