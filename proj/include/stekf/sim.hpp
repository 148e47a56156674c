#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stekf/filter.hpp"

namespace stekf::sim {

// A configuration file or CLI flag is invalid.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MeasurementModel {
  kAmbientTruth,    // z_m = pr(x0 + eps_m): noise on the raw draw
  kProjectedTruth,  // z_m = pr(pr(x0) + eps_m): noise on the projected draw
};

std::string to_string(MeasurementModel m);
MeasurementModel measurement_model_from_string(const std::string& s);

enum class MaxvarSource { kClosedForm, kMc, kFile };

std::string to_string(MaxvarSource s);
MaxvarSource maxvar_source_from_string(const std::string& s);

struct ExperimentConfig {
  int n = 0;
  int k = 0;
  std::vector<double> sigma0_2;  // one figure panel per value
  std::vector<double> xi2;       // curves within a panel
  int num_steps = 200;
  int num_replicates = 20;
  std::uint64_t seed = 1;
  MaxvarSource maxvar_source = MaxvarSource::kMc;
  long mc_samples = 100000;
  std::string maxvar_file;  // used when maxvar_source == kFile
  std::string output_dir;
  MeasurementModel measurement_model = MeasurementModel::kAmbientTruth;
  int jobs = 1;  // CLI-only knob, excluded from the config hash

  void validate() const;  // throws ConfigError
};

// Flat `key = value` file with '#' comments. Unknown keys are errors.
// Values for sigma0_2 / xi2 are whitespace- or comma-separated lists.
// Relative maxvar_file paths resolve against the config file directory.
ExperimentConfig parse_config_file(const std::string& path);

// FNV-1a over the canonicalized semantic fields plus the resolved
// maximal scalar variance; identical hash implies identical outputs.
std::string config_hash(const ExperimentConfig& cfg, double maxvar);

struct Scenario {
  Mat x0;                                // ambient draw
  StiefelPoint truth;                    // pr(x0)
  std::vector<StiefelPoint> measurements;
  int resamples = 0;                     // rank-deficient draws retried
};

struct ScenarioParams {
  int n = 0;
  int k = 0;
  double sigma0_2 = 0.0;
  double xi2 = 0.0;
  int num_steps = 0;
  MeasurementModel measurement_model = MeasurementModel::kAmbientTruth;
};

Scenario generate_scenario(const ScenarioParams& params, Rng& rng);

struct TraceRow {
  int step = 0;  // 1-based
  double pk = 0.0;
  double gain = 0.0;
  std::optional<double> dist2_norm;
  std::optional<double> innov_norm;
};

struct RunTrace {
  double sigma0_2 = 0.0;
  double xi2 = 0.0;
  int replicate = 0;  // 0-based
  std::uint64_t stream_seed = 0;
  std::string config_hash;
  std::vector<TraceRow> rows;            // always num_steps long
  std::optional<int> failed_at_step;     // 1-based step of a fatal error
  int resamples = 0;
};

struct SummaryRow {
  int n = 0;
  int k = 0;
  double sigma0_2 = 0.0;
  double xi2 = 0.0;
  int step = 0;
  double pk = 0.0;
  double gain = 0.0;
  std::optional<double> dist2_med;
  std::optional<double> dist2_q1;
  std::optional<double> dist2_q3;
  std::optional<double> innov_med;
  int n_ok = 0;
};

struct ExperimentResult {
  double maxvar = 0.0;
  std::string hash;
  std::vector<RunTrace> traces;
  std::vector<SummaryRow> summary;
  std::vector<std::string> files_written;
};

// Runs every (sigma0_2, xi2, replicate) cell, writes one trace CSV per
// cell, a runs.csv manifest, summary.csv, and one SVG panel per
// sigma0_2 value under cfg.output_dir. Filter step failures are
// recorded in the affected trace without aborting the batch.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministic SVG panels (log-scale y): per xi2, the estimated
// intrinsic variance and the median normalized squared distance against
// the step index. Returns the files written; empty summary is an error.
std::vector<std::string> emit_plots(const std::vector<SummaryRow>& summary,
                                    const std::string& out_dir);

std::vector<SummaryRow> read_summary_csv(const std::string& path);

// Formatting shared by writers and tests: shortest round-trip-ish "%.12g".
std::string format_double(double v);

}  // namespace stekf::sim
