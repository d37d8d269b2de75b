#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyped/analysis.h"
#include "polyped/control_params.h"
#include "polyped/robot_model.h"
#include "polyped/sim_config.h"
#include "polyped/terrain.h"

namespace polyped {

// Everything one batch needs: robot geometry, terrain, controller gains,
// solver settings, and the trial plan. JSON round-trips losslessly.
struct ExperimentConfig {
  RobotModel robot;
  TerrainSpec terrain;
  ControlParams control;
  SimConfig sim;
  int n_trials = 1;
  std::uint64_t base_seed = 1;
  double duration = 30.0;
  std::string out_dir = "out";

  void validate() const;
};

// Serialization keeps every field explicit so a saved config is a complete
// record of the run. Unknown keys are rejected with their names listed.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

// Outcome of one seeded trial. `ok` is false when the solver diverged or the
// run threw; `phase_ok` is false when the run was too short (or too irregular)
// for phase estimation, which is reported but not an error.
struct TrialReport {
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  bool phase_ok = false;
  ConvergenceReport convergence;
  PostureReport posture;
  double period_estimate = 0.0;  // closed-form cycle time at these gains
  double measured_period = 0.0;  // mean spacing of stroke entries, 0 if n/a
};

// Batch roll-up across trials.
struct BatchSummary {
  int n_trials = 0;
  int n_failed = 0;
  double convergence_rate = 0.0;           // fraction of trials converged
  double median_periods_to_converge = 0.0; // over converged trials
  Stats height;                            // of per-trial steady means
  Stats pitch;
  Stats roll;
  double mean_speed = 0.0;
  std::vector<TrialReport> trials;
};

// Phase-error tolerance used for the convergence verdict in reports.
inline constexpr double kPhaseErrorTol = 0.3;

// Runs one trial with seed base_seed + index and writes trajectory.csv,
// phase_error.csv, and report.json into `dir` (created if needed).
TrialReport run_trial_to_dir(const ExperimentConfig& config, int index,
                             const std::string& dir);

// Runs all trials on a bounded worker pool (each writes only its own
// trial_NNN/ subdirectory), then writes aggregate.json and aggregate.csv
// into config.out_dir. Trial failures are recorded, not fatal.
BatchSummary run_batch(const ExperimentConfig& config);

// Re-reads a batch directory and emits long-format tables for plotting:
// phase_error_long.csv (trial,t,phase_error), posture_long.csv
// (trial,t,height,pitch,roll), and feet_long.csv (trial,foot,t,x,z).
// Posture rows are skipped for trials whose report marks posture invalid.
// Throws if expected trial artifacts are missing, listing them.
void export_plot_data(const std::string& batch_dir);

}  // namespace polyped
