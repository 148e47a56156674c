#pragma once

#include <cstdint>
#include <string>

#include "stekf/matcore.hpp"
#include "stekf/rng.hpp"

namespace stekf {

// A point on St(n,k): an n-by-k matrix with orthonormal columns.
// Construction validates ||X^T X - I_k||_F: accepted as-is up to
// tol::kOrth, re-orthonormalized through the polar projection up to
// tol::kOrthRepair, rejected beyond that.
class StiefelPoint {
 public:
  explicit StiefelPoint(Mat X);

  const Mat& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

  double orthonormality_defect() const;

 private:
  struct already_orthonormal_tag {};
  StiefelPoint(Mat X, already_orthonormal_tag) : m_(std::move(X)) {}

  Mat m_;

  friend StiefelPoint project_to_stiefel(const Mat&, double);
};

// A tangent vector at `base`: X^T V skew-symmetric within tol::kTangency.
class TangentVector {
 public:
  TangentVector(StiefelPoint base, Mat dir);

  const StiefelPoint& base() const { return base_; }
  const Mat& dir() const { return dir_; }

 private:
  StiefelPoint base_;
  Mat dir_;
};

// Manifold metadata consumed by the filter: dimensions plus the cached
// maximal scalar variance and how it was obtained.
struct ManifoldSpec {
  int n = 0;
  int k = 0;
  double maxvar = 0.0;

  // Provenance of `maxvar` (builders in stats.hpp fill these in).
  std::string maxvar_source;        // "closed_form" | "mc" | "file"
  long maxvar_samples = 0;          // MC sample count, 0 for closed form
  std::uint64_t maxvar_seed = 0;    // MC seed, 0 for closed form

  ManifoldSpec(int n, int k, double maxvar, std::string source = "unspecified",
               long samples = 0, std::uint64_t seed = 0);

  int dim() const { return n * k - k * (k + 1) / 2; }
};

// Polar projection X (X^T X)^(-1/2): the closest point of St(n,k).
// Requires full column rank (smallest eigenvalue of X^T X > eps_rank).
StiefelPoint project_to_stiefel(const Mat& X, double eps_rank = tol::kRank);

// Orthogonal projection of an ambient matrix onto the tangent space at X:
// W - X sym(X^T W), with sym(A) = (A + A^T)/2.
TangentVector tangent_project(const StiefelPoint& X, const Mat& W);

// Canonical metric g(V,W) = trace(V^T (I - X X^T / 2) W) at the common base.
double canonical_inner(const StiefelPoint& X, const TangentVector& V,
                       const TangentVector& W);
double canonical_norm(const TangentVector& V);

// Geodesic of the canonical metric through X with initial velocity V,
// evaluated at time t (closed form via a 2k-by-2k skew block exponential).
StiefelPoint exp_map(const StiefelPoint& X, const TangentVector& V,
                     double t = 1.0);

struct LogOptions {
  double residual_tol = tol::kLogResidual;
  int max_iter = tol::kLogMaxIter;
  // Far pairs: retry with a chord-initialized shooting method when the
  // algebraic iteration fails. Off by default; the Monte Carlo maximal
  // scalar variance estimator turns it on.
  bool shooting_fallback = false;
};

// Inverse of exp_map: the tangent vector V at X with exp_X(V) = Y.
// Throws NoConvergenceError past the iteration cap and CutLocusError
// when the residual stagnates (Y at or beyond the cut locus of X).
TangentVector log_map(const StiefelPoint& X, const StiefelPoint& Y,
                      const LogOptions& opts = {});

// Canonical-metric geodesic distance ||log_X(Y)||.
double geodesic_distance(const StiefelPoint& X, const StiefelPoint& Y,
                         const LogOptions& opts = {});

// Haar-uniform point: Q factor of a Gaussian matrix with the
// sign-corrected QR (Mezzadri 2007), invariant under left O(n) action.
StiefelPoint sample_uniform(int n, int k, Rng& rng);
StiefelPoint sample_uniform(const ManifoldSpec& spec, Rng& rng);

}  // namespace stekf
