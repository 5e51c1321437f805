#ifndef FSMPPI_EXPERIMENT_HPP_
#define FSMPPI_EXPERIMENT_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsmppi/analysis.hpp"
#include "fsmppi/controller.hpp"

namespace fsmppi {

enum class SystemKind { kDoubleIntegrator, kLaggedVehicle };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);
std::shared_ptr<const System> make_system(SystemKind kind);

/// One declarative experiment: a system, a controller, and a seeded batch of
/// receding-horizon repetitions.
struct ExperimentConfig {
  SystemKind system = SystemKind::kDoubleIntegrator;
  MppiConfig controller;
  double duration_seconds = 3.0;
  int repetitions = 1;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  double psd_window_seconds = 2.0;  // closed-loop control PSD window

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment(const std::string& path);

/// Aggregate of one experiment's repetitions. Timing columns are diagnostics
/// only and excluded from determinism guarantees.
struct ExperimentResult {
  std::string sampler_name;
  EnsembleStats cost;       // accumulated cost per repetition
  EnsembleStats solve_ms;   // wall clock per solve, pooled over repetitions
  int failures = 0;         // repetitions aborted by solver errors
  std::vector<RunLog> logs;
};

/// Executes the repetitions (per-repetition derived seeds, so any thread
/// count yields identical logs) without touching the filesystem.
ExperimentResult execute_experiment(const ExperimentConfig& config, int num_threads = 1);

/// `run` command: execute and write runs.csv, control_psd.csv, summary.csv
/// under config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, int num_threads = 1);

/// `sweep` command: one run_experiment per value of the named numeric axis
/// (subdirectory per value) plus a combined sweep_summary.csv.
std::vector<ExperimentResult> sweep_experiment(const ExperimentConfig& base,
                                               const std::string& axis,
                                               const std::vector<double>& values,
                                               int num_threads = 1);

/// Sets a numeric config field by name ("sigma" and "gamma" apply to every
/// control dimension). Throws on unknown axis.
void apply_axis(ExperimentConfig& config, const std::string& axis, double value);

/// `sample-noise` command: writes the raw batch (noise.csv) and its ensemble
/// periodogram (noise_psd.csv) for the given per-dimension colored specs.
void sample_noise_command(const std::vector<ColoredSpec>& specs, int num_samples,
                          std::uint64_t seed, const std::string& out_dir,
                          int num_threads = 1);

/// `analyze` command: recompute accumulated-cost statistics and control PSDs
/// from a stored runs.csv; writes analysis_summary.csv and analysis_psd.csv.
void analyze_command(const std::string& runs_csv, double dt, double window_seconds,
                     const std::string& out_dir);

/// Reads a runs.csv back into per-repetition logs (states, controls, costs).
std::vector<RunLog> load_run_logs(const std::string& runs_csv, double dt);

}  // namespace fsmppi

#endif  // FSMPPI_EXPERIMENT_HPP_
