#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stekf/stiefel.hpp"

namespace stekf {

// Isotropic matrix normal N(mean, variance * I) on the ambient space.
struct IsotropicNormalSpec {
  Mat mean;
  double variance = 0.0;

  IsotropicNormalSpec(Mat mean, double variance);

  // Degenerate variance = 0, for limit checks in tests.
  struct degenerate_for_tests_tag {};
  IsotropicNormalSpec(Mat mean, double variance, degenerate_for_tests_tag);
};

// Law of the polar projection of N(mean, variance * I) with mean on the
// manifold.
struct ProjectedNormalSpec {
  StiefelPoint mean;
  double variance = 0.0;

  ProjectedNormalSpec(StiefelPoint mean, double variance);
};

Mat sample_normal(const IsotropicNormalSpec& spec, Rng& rng);

// Projection of a Gaussian perturbation of the mean; resamples on the
// measure-zero rank-deficient draw.
StiefelPoint sample_projected_normal(const ProjectedNormalSpec& spec, Rng& rng);

// Maximal scalar variance of the unit sphere S^sphere_dim (closed form:
// pi^2/3 for S^1, finite odd/even series otherwise).
double sphere_max_scalar_variance(int sphere_dim);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;   // samples that entered the estimate
  long failures = 0;  // excluded log-map failures

  double failure_fraction() const {
    const long total = samples + failures;
    return total == 0 ? 0.0 : static_cast<double>(failures) / total;
  }
};

// Monte Carlo estimate of the maximal scalar variance of St(n,k):
// dimension-normalized mean of dist^2(I_nk, Y) over Haar-uniform Y.
// Log-map failures are excluded and reported; a failure fraction above
// `max_failure_fraction` raises UnreliableEstimateError with the
// partial result attached.
McEstimate max_scalar_variance_mc(int n, int k, long samples, Rng& rng,
                                  double max_failure_fraction = 0.05);

// Monte Carlo estimate of the intrinsic scalar variance of a projected
// normal: dimension-normalized mean of dist^2(mean, sample).
McEstimate projected_normal_scalar_variance_mc(
    const ProjectedNormalSpec& spec, long samples, Rng& rng,
    double max_failure_fraction = 0.05);

// Two-point Padé approximation of the intrinsic scalar variance of a
// projected normal with ambient variance v2:  v2 * M / (M + v2).
// Strictly increasing, bounded by min(v2, M).
double intrinsic_from_ambient_variance(double v2, double maxvar);

// Inverse map P * M / (M - P); requires 0 <= P < M, otherwise raises
// VarianceRangeError (a filter state carrying P >= M is corrupt).
double ambient_from_intrinsic_variance(double P, double maxvar);

// Riemannian center of mass: fixed point of p <- exp_p(sum w_i log_p(y_i)),
// unit step with halving on objective increase. Deterministic: starts at
// the input point minimizing the weighted sum of squared distances
// (candidates capped at 64 evenly strided points for large inputs).
StiefelPoint frechet_mean(std::span<const StiefelPoint> points,
                          std::span<const double> weights,
                          double grad_tol = tol::kFrechetGrad,
                          int max_iter = tol::kFrechetMaxIter);

// Frozen Monte Carlo constants: plain-text table, one record per line:
//   manifold n k samples seed estimate std_error failure_fraction
struct MaxvarRecord {
  std::string manifold;
  int n = 0;
  int k = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double failure_fraction = 0.0;
};

std::vector<MaxvarRecord> read_maxvar_table(const std::string& path);
void write_maxvar_table(const std::string& path,
                        const std::vector<MaxvarRecord>& records);
std::string format_maxvar_record(const MaxvarRecord& rec);

// Builders for ManifoldSpec with a resolved maximal scalar variance.
ManifoldSpec make_spec_closed_form(int n, int k);  // k == 1 only
ManifoldSpec make_spec_mc(int n, int k, long samples, std::uint64_t seed);
ManifoldSpec make_spec_from_table(int n, int k,
                                  const std::vector<MaxvarRecord>& table);

}  // namespace stekf
