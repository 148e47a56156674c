#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stekf/stats.hpp"
#include "stekf/stiefel.hpp"

namespace stekf {

// Linear drift dX = A X dt + nu dB with skew-symmetric A, observed on
// the manifold through projections with measurement variance xi2.
struct SystemModel {
  Mat A;             // n x n, skew-symmetric
  double nu2 = 0.0;  // process noise variance
  double xi2 = 0.0;  // measurement noise variance
  ManifoldSpec spec;

  SystemModel(Mat A, double nu2, double xi2, ManifoldSpec spec);

  // Constant process (A = 0, nu = 0).
  static SystemModel constant_process(double xi2, ManifoldSpec spec);
};

// Posterior after an update: mean on the manifold plus one scalar
// variance in two coordinates (ambient v2 and intrinsic P, coupled by
// the Padé map).
class FilterState {
 public:
  FilterState(StiefelPoint mean, double ambient_var, double maxvar,
              long step_index = 0, std::optional<double> last_gain = {});

  const StiefelPoint& mean() const { return mean_; }
  double ambient_var() const { return ambient_var_; }
  double intrinsic_var() const { return intrinsic_var_; }
  double maxvar() const { return maxvar_; }
  long step_index() const { return step_index_; }
  std::optional<double> last_gain() const { return last_gain_; }

 private:
  StiefelPoint mean_;
  double ambient_var_;
  double intrinsic_var_;
  double maxvar_;
  long step_index_;
  std::optional<double> last_gain_;
};

struct Prediction {
  StiefelPoint mean_pred;
  double ambient_var_pred = 0.0;
  double p_pred = 0.0;  // intrinsic coordinate of ambient_var_pred
};

// Per-step diagnostics record.
struct StepReport {
  StiefelPoint mean_pred;
  double p_pred = 0.0;
  double gain = 0.0;
  double innovation_norm = 0.0;
  FilterState post;
};

// Propagate through the drift for elapsed time t:
// mean through exp(tA), ambient variance to v2 + t*nu2.
Prediction predict(const FilterState& state, const SystemModel& model,
                   double t);

// Measurement update: innovation y = log_pred(z), gain
// K = v2 / (v2 + xi2), mean moved to exp_pred(K y), intrinsic variance
// scaled by (1 - K) and mapped back to an ambient variance.
std::pair<FilterState, StepReport> update(const Prediction& pred,
                                          const StiefelPoint& z,
                                          const SystemModel& model,
                                          long step_index);

struct Measurement {
  double time = 0.0;
  StiefelPoint z;
};

// A filter step failed (log-map did not converge) at this measurement.
struct FilterStepError : std::runtime_error {
  FilterStepError(std::size_t index, const std::string& reason);
  std::size_t measurement_index;
};

// Fold predict + update over measurements taken at strictly increasing
// times (elapsed time per step is the difference of consecutive stamps,
// starting from 0). The initial mean must lie on the manifold.
std::vector<StepReport> run(const IsotropicNormalSpec& initial,
                            const SystemModel& model,
                            const std::vector<Measurement>& measurements);

struct DiagnosticPoint {
  double intrinsic_var = 0.0;
  // dist^2(mean_m, truth) / dim; empty when the log map fails there.
  std::optional<double> dist2_normalized;
};

std::vector<DiagnosticPoint> diagnostics(const std::vector<StepReport>& reports,
                                         const StiefelPoint& truth,
                                         const ManifoldSpec& spec);

}  // namespace stekf
