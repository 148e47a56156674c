#pragma once

#include <stdexcept>
#include <string>

namespace stekf {

// Incompatible or invalid matrix dimensions.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is numerically rank deficient where full rank is required.
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iteration hit its cap without reaching its residual tolerance.
struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Log-map residual stagnated: the target point is at or beyond the
// cut locus of the base point, where no unique geodesic exists.
struct CutLocusError : NoConvergenceError {
  using NoConvergenceError::NoConvergenceError;
};

// A scalar variance left its admissible range (e.g. an intrinsic
// variance at or above the manifold's maximal scalar variance).
struct VarianceRangeError : std::domain_error {
  using std::domain_error::domain_error;
};

// A Monte Carlo estimate whose excluded-sample fraction exceeds the
// reliability budget. Carries the partial result.
struct UnreliableEstimateError : std::runtime_error {
  UnreliableEstimateError(const std::string& what, double estimate,
                          double std_error, double failure_fraction)
      : std::runtime_error(what),
        estimate(estimate),
        std_error(std_error),
        failure_fraction(failure_fraction) {}

  double estimate;
  double std_error;
  double failure_fraction;
};

}  // namespace stekf
