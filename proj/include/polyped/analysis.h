#pragma once

#include <vector>

#include "polyped/trajectory.h"

namespace polyped {

// Per-segment unwrapped instantaneous phase, sampled every dt from t0.
struct PhaseSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<std::vector<double>> phases;  // [segment][sample]
  std::vector<double> residuals;            // per-segment estimator residual
};

// Channels for one segment: [x_footL, z_footL, x_footR, z_footR, yaw,
// roll_L, roll_R], feet expressed in the virtual body frame (their world
// coordinates drift with locomotion; the body frame removes that trend).
// Each channel is mean-centered and variance-normalized; zero-variance
// channels are dropped with a warning. The first record is excluded.
std::vector<std::vector<double>> build_phase_signal(const Trajectory& traj, int segment);

// Phase from a multi-dimensional limit cycle: project onto the top-2
// whitened principal components, take the plane angle, unwrap, then apply a
// density-uniformizing Fourier correction (order 5) so phase advances at a
// constant mean rate. Requires at least 2 full cycles; anchored so the
// correction vanishes at angle zero (a common additive constant across
// signals with the same cycle shape). Throws on fewer than 2 cycles.
std::vector<double> estimate_phase(const std::vector<std::vector<double>>& channels);

// Circular difference between the mean even-segment and odd-segment phasors,
// in (-pi, pi]. Segments are indexed from the head at 0.
std::vector<double> even_odd_phase_difference(const PhaseSeries& phases);

// |wrap(delta - target)|: circular distance to the target offset.
std::vector<double> phase_error(const std::vector<double>& delta, double target);
double wrap_angle(double a);  // into (-pi, pi]

struct ConvergenceReport {
  bool converged = false;
  double periods_to_converge = 0.0;
  double steady_state_mean = 0.0;
  double steady_state_std = 0.0;
};

// Converged when the error stays below tol for one full period; convergence
// time is the start of that window. Steady stats cover the final 3 periods.
// Requires the series to span at least 5 periods.
ConvergenceReport convergence_report(const std::vector<double>& error, double t0,
                                     double dt, double period_estimate, double tol);

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

struct PostureReport {
  bool valid = false;  // false for floating runs: no ground reference
  Stats height, pitch, roll;        // over the second half of the run
  double forward_displacement = 0.0;  // whole run, along the mean heading
  double mean_speed = 0.0;
};

PostureReport posture_report(const Trajectory& traj);

// Full pipeline: per-segment signals -> phases, aligned on a common timebase.
PhaseSeries trajectory_phases(const Trajectory& traj);

// Mean interval between successive STROKE_A entries of one segment.
double measured_stroke_period(const Trajectory& traj, int segment);

Stats series_stats(const std::vector<double>& xs);

}  // namespace polyped
