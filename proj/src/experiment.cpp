#include "polyped/experiment.h"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polyped/gait_cycle.h"
#include "polyped/log.h"
#include "polyped/sim.h"

namespace polyped {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON plumbing

void require_keys(const json& j, const char* scope,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument(std::string(scope) + ": expected an object");
  std::string unknown;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
      return it.key() == k;
    });
    if (!known) unknown += (unknown.empty() ? "" : ", ") + it.key();
  }
  if (!unknown.empty())
    throw std::invalid_argument(std::string(scope) + ": unknown keys: " + unknown);
}

RobotModel robot_from_json(const json& j) {
  require_keys(j, "robot", {"n_segments", "segment_length", "hip_lateral_offset",
                            "leg_length", "segment_mass"});
  RobotModel m;
  m.n_segments = j.value("n_segments", m.n_segments);
  m.segment_length = j.value("segment_length", m.segment_length);
  m.hip_lateral_offset = j.value("hip_lateral_offset", m.hip_lateral_offset);
  m.leg_length = j.value("leg_length", m.leg_length);
  m.segment_mass = j.value("segment_mass", m.segment_mass);
  return m;
}

json robot_to_json(const RobotModel& m) {
  return json{{"n_segments", m.n_segments},
              {"segment_length", m.segment_length},
              {"hip_lateral_offset", m.hip_lateral_offset},
              {"leg_length", m.leg_length},
              {"segment_mass", m.segment_mass}};
}

TerrainSpec terrain_from_json(const json& j) {
  require_keys(j, "terrain",
               {"kind", "rough_seed", "rough_z_scale", "rough_z_multiplier",
                "rough_length_scale", "rough_extent_x", "rough_extent_y",
                "rough_resolution", "hill_max_slope", "hill_extent", "stairs_n_up",
                "stairs_n_down", "stairs_step_length", "stairs_step_height"});
  TerrainSpec s;
  if (j.contains("kind")) s.kind = terrain_kind_from_string(j.at("kind").get<std::string>());
  s.rough_seed = j.value("rough_seed", s.rough_seed);
  s.rough_z_scale = j.value("rough_z_scale", s.rough_z_scale);
  s.rough_z_multiplier = j.value("rough_z_multiplier", s.rough_z_multiplier);
  s.rough_length_scale = j.value("rough_length_scale", s.rough_length_scale);
  s.rough_extent_x = j.value("rough_extent_x", s.rough_extent_x);
  s.rough_extent_y = j.value("rough_extent_y", s.rough_extent_y);
  s.rough_resolution = j.value("rough_resolution", s.rough_resolution);
  s.hill_max_slope = j.value("hill_max_slope", s.hill_max_slope);
  s.hill_extent = j.value("hill_extent", s.hill_extent);
  s.stairs_n_up = j.value("stairs_n_up", s.stairs_n_up);
  s.stairs_n_down = j.value("stairs_n_down", s.stairs_n_down);
  s.stairs_step_length = j.value("stairs_step_length", s.stairs_step_length);
  s.stairs_step_height = j.value("stairs_step_height", s.stairs_step_height);
  return s;
}

json terrain_to_json(const TerrainSpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"rough_seed", s.rough_seed},
              {"rough_z_scale", s.rough_z_scale},
              {"rough_z_multiplier", s.rough_z_multiplier},
              {"rough_length_scale", s.rough_length_scale},
              {"rough_extent_x", s.rough_extent_x},
              {"rough_extent_y", s.rough_extent_y},
              {"rough_resolution", s.rough_resolution},
              {"hill_max_slope", s.hill_max_slope},
              {"hill_extent", s.hill_extent},
              {"stairs_n_up", s.stairs_n_up},
              {"stairs_n_down", s.stairs_n_down},
              {"stairs_step_length", s.stairs_step_length},
              {"stairs_step_height", s.stairs_step_height}};
}

ControlParams control_from_json(const json& j) {
  require_keys(j, "control",
               {"yaw_amplitude", "yaw_threshold", "leg_up", "leg_up_threshold",
                "leg_down", "touchdown_offset", "wait_rise_delay", "wait_fall_delay",
                "yaw_speed_max", "leg_speed_max", "profile_accel",
                "lift_right_on_positive_yaw"});
  ControlParams p;
  p.yaw_amplitude = j.value("yaw_amplitude", p.yaw_amplitude);
  p.yaw_threshold = j.value("yaw_threshold", p.yaw_threshold);
  p.leg_up = j.value("leg_up", p.leg_up);
  p.leg_up_threshold = j.value("leg_up_threshold", p.leg_up_threshold);
  p.leg_down = j.value("leg_down", p.leg_down);
  p.touchdown_offset = j.value("touchdown_offset", p.touchdown_offset);
  p.wait_rise_delay = j.value("wait_rise_delay", p.wait_rise_delay);
  p.wait_fall_delay = j.value("wait_fall_delay", p.wait_fall_delay);
  p.yaw_speed_max = j.value("yaw_speed_max", p.yaw_speed_max);
  p.leg_speed_max = j.value("leg_speed_max", p.leg_speed_max);
  p.profile_accel = j.value("profile_accel", p.profile_accel);
  p.lift_right_on_positive_yaw =
      j.value("lift_right_on_positive_yaw", p.lift_right_on_positive_yaw);
  return p;
}

json control_to_json(const ControlParams& p) {
  return json{{"yaw_amplitude", p.yaw_amplitude},
              {"yaw_threshold", p.yaw_threshold},
              {"leg_up", p.leg_up},
              {"leg_up_threshold", p.leg_up_threshold},
              {"leg_down", p.leg_down},
              {"touchdown_offset", p.touchdown_offset},
              {"wait_rise_delay", p.wait_rise_delay},
              {"wait_fall_delay", p.wait_fall_delay},
              {"yaw_speed_max", p.yaw_speed_max},
              {"leg_speed_max", p.leg_speed_max},
              {"profile_accel", p.profile_accel},
              {"lift_right_on_positive_yaw", p.lift_right_on_positive_yaw}};
}

SimConfig sim_from_json(const json& j) {
  require_keys(j, "sim",
               {"dt", "gravity", "friction_mu", "foot_spring_k", "foot_tangential_k",
                "backbone_pitch_stiffness", "solver_tol", "max_iters",
                "trust_translation", "trust_rotation", "trust_tip"});
  SimConfig c;
  c.dt = j.value("dt", c.dt);
  c.gravity = j.value("gravity", c.gravity);
  c.friction_mu = j.value("friction_mu", c.friction_mu);
  c.foot_spring_k = j.value("foot_spring_k", c.foot_spring_k);
  c.foot_tangential_k = j.value("foot_tangential_k", c.foot_tangential_k);
  c.backbone_pitch_stiffness =
      j.value("backbone_pitch_stiffness", c.backbone_pitch_stiffness);
  c.solver_tol = j.value("solver_tol", c.solver_tol);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.trust_translation = j.value("trust_translation", c.trust_translation);
  c.trust_rotation = j.value("trust_rotation", c.trust_rotation);
  c.trust_tip = j.value("trust_tip", c.trust_tip);
  return c;
}

json sim_to_json(const SimConfig& c) {
  return json{{"dt", c.dt},
              {"gravity", c.gravity},
              {"friction_mu", c.friction_mu},
              {"foot_spring_k", c.foot_spring_k},
              {"foot_tangential_k", c.foot_tangential_k},
              {"backbone_pitch_stiffness", c.backbone_pitch_stiffness},
              {"solver_tol", c.solver_tol},
              {"max_iters", c.max_iters},
              {"trust_translation", c.trust_translation},
              {"trust_rotation", c.trust_rotation},
              {"trust_tip", c.trust_tip}};
}

json report_to_json(const TrialReport& r) {
  return json{{"trial", r.trial},
              {"seed", r.seed},
              {"ok", r.ok},
              {"error", r.error},
              {"period_estimate", r.period_estimate},
              {"measured_period", r.measured_period},
              {"phase",
               {{"estimated", r.phase_ok},
                {"converged", r.convergence.converged},
                {"periods_to_converge", r.convergence.periods_to_converge},
                {"steady_state_mean", r.convergence.steady_state_mean},
                {"steady_state_std", r.convergence.steady_state_std}}},
              {"posture",
               {{"valid", r.posture.valid},
                {"height_mean", r.posture.height.mean},
                {"height_std", r.posture.height.std},
                {"pitch_mean", r.posture.pitch.mean},
                {"pitch_std", r.posture.pitch.std},
                {"roll_mean", r.posture.roll.mean},
                {"roll_std", r.posture.roll.std},
                {"forward_displacement", r.posture.forward_displacement},
                {"mean_speed", r.posture.mean_speed}}}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string trial_dir_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03d", index);
  return buf;
}

// ---------------------------------------------------------------------------
// Trial execution

TrialReport run_trial_impl(const ExperimentConfig& config, const Terrain& terrain,
                           int index, const std::string& dir) {
  TrialReport rep;
  rep.trial = index;
  rep.seed = config.base_seed + static_cast<std::uint64_t>(index);

  MotorLimits yaw_motor;
  yaw_motor.v_max = config.control.yaw_speed_max;
  yaw_motor.accel = config.control.profile_accel;
  MotorLimits leg_motor;
  leg_motor.v_max = config.control.leg_speed_max;
  leg_motor.accel = config.control.profile_accel;
  rep.period_estimate = estimate_cycle_period(config.control, yaw_motor, leg_motor);

  fs::create_directories(dir);

  Trajectory traj;
  try {
    traj = run_trial(config.robot, terrain, config.control, config.sim, rep.seed,
                     config.duration);
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
    log_warn("trial " + std::to_string(index) + " failed: " + rep.error);
    write_text(dir + "/report.json", report_to_json(rep).dump(2) + "\n");
    return rep;
  }

  traj.save_csv(dir + "/trajectory.csv");

  try {
    rep.measured_period = measured_stroke_period(traj, 0);
  } catch (const std::exception&) {
    rep.measured_period = 0.0;
  }

  std::string phase_csv = "# polyped phase error v1: t,delta,error\n";
  try {
    const PhaseSeries phases = trajectory_phases(traj);
    const std::vector<double> delta = even_odd_phase_difference(phases);
    const std::vector<double> error = phase_error(delta, M_PI);
    char buf[128];
    for (size_t i = 0; i < delta.size(); ++i) {
      const double t = phases.t0 + static_cast<double>(i) * phases.dt;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t, delta[i], error[i]);
      phase_csv += buf;
    }
    rep.phase_ok = true;
    try {
      rep.convergence = convergence_report(error, phases.t0, phases.dt,
                                           rep.period_estimate, kPhaseErrorTol);
    } catch (const std::exception& e) {
      // Run shorter than the report needs: phases stand, verdict stays open.
      log_info("trial " + std::to_string(index) + ": no convergence verdict (" +
               std::string(e.what()) + ")");
    }
  } catch (const std::exception& e) {
    rep.phase_ok = false;
    log_info("trial " + std::to_string(index) + ": no phase estimate (" +
             std::string(e.what()) + ")");
  }
  write_text(dir + "/phase_error.csv", phase_csv);

  rep.posture = posture_report(traj);
  write_text(dir + "/report.json", report_to_json(rep).dump(2) + "\n");
  return rep;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Splits one CSV line; returns the raw fields so re-emitted numbers keep
// their exact text.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config API

void ExperimentConfig::validate() const {
  robot.validate();
  terrain.validate();
  control.validate();
  sim.validate();
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
  if (out_dir.empty()) throw std::invalid_argument("out_dir must be non-empty");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  require_keys(j, "config", {"robot", "terrain", "control", "sim", "n_trials",
                             "base_seed", "duration", "out_dir"});
  ExperimentConfig c;
  if (j.contains("robot")) c.robot = robot_from_json(j.at("robot"));
  if (j.contains("terrain")) c.terrain = terrain_from_json(j.at("terrain"));
  if (j.contains("control")) c.control = control_from_json(j.at("control"));
  if (j.contains("sim")) c.sim = sim_from_json(j.at("sim"));
  c.n_trials = j.value("n_trials", c.n_trials);
  c.base_seed = j.value("base_seed", c.base_seed);
  c.duration = j.value("duration", c.duration);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.validate();
  return c;
}

std::string config_to_json_text(const ExperimentConfig& config) {
  const json j{{"robot", robot_to_json(config.robot)},
               {"terrain", terrain_to_json(config.terrain)},
               {"control", control_to_json(config.control)},
               {"sim", sim_to_json(config.sim)},
               {"n_trials", config.n_trials},
               {"base_seed", config.base_seed},
               {"duration", config.duration},
               {"out_dir", config.out_dir}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json_text(ss.str());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  write_text(path, config_to_json_text(config));
}

// ---------------------------------------------------------------------------
// Batch orchestration

TrialReport run_trial_to_dir(const ExperimentConfig& config, int index,
                             const std::string& dir) {
  config.validate();
  const Terrain terrain = Terrain::build(config.terrain);
  return run_trial_impl(config, terrain, index, dir);
}

BatchSummary run_batch(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);
  save_config(config, config.out_dir + "/config.json");

  const Terrain terrain = Terrain::build(config.terrain);  // shared, read-only

  BatchSummary summary;
  summary.n_trials = config.n_trials;
  summary.trials.resize(config.n_trials);

  std::atomic<int> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers = std::min<unsigned>(hw, config.n_trials);

  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.n_trials) return;
      const std::string dir = config.out_dir + "/" + trial_dir_name(i);
      try {
        summary.trials[i] = run_trial_impl(config, terrain, i, dir);
      } catch (const std::exception& e) {
        // run_trial_impl already catches solver errors; this guards I/O.
        summary.trials[i].trial = i;
        summary.trials[i].seed = config.base_seed + static_cast<std::uint64_t>(i);
        summary.trials[i].ok = false;
        summary.trials[i].error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<double> periods, heights, pitches, rolls, speeds;
  int n_converged = 0;
  for (const TrialReport& r : summary.trials) {
    if (!r.ok) ++summary.n_failed;
    if (r.ok && r.phase_ok && r.convergence.converged) {
      ++n_converged;
      periods.push_back(r.convergence.periods_to_converge);
    }
    if (r.ok && r.posture.valid) {
      heights.push_back(r.posture.height.mean);
      pitches.push_back(r.posture.pitch.mean);
      rolls.push_back(r.posture.roll.mean);
      speeds.push_back(r.posture.mean_speed);
    }
  }
  summary.convergence_rate =
      static_cast<double>(n_converged) / static_cast<double>(config.n_trials);
  summary.median_periods_to_converge = median(periods);
  summary.height = series_stats(heights);
  summary.pitch = series_stats(pitches);
  summary.roll = series_stats(rolls);
  summary.mean_speed = series_stats(speeds).mean;

  json agg{{"n_trials", summary.n_trials},
           {"n_failed", summary.n_failed},
           {"convergence_rate", summary.convergence_rate},
           {"median_periods_to_converge", summary.median_periods_to_converge},
           {"height_mean", summary.height.mean},
           {"pitch_mean", summary.pitch.mean},
           {"roll_mean", summary.roll.mean},
           {"mean_speed", summary.mean_speed}};
  json per_trial = json::array();
  for (const TrialReport& r : summary.trials) per_trial.push_back(report_to_json(r));
  agg["trials"] = per_trial;
  write_text(config.out_dir + "/aggregate.json", agg.dump(2) + "\n");

  std::string csv =
      "trial,seed,ok,converged,periods_to_converge,steady_error_mean,"
      "steady_error_std,height_mean,pitch_mean,roll_mean,forward_displacement,"
      "mean_speed,measured_period\n";
  char buf[512];
  for (const TrialReport& r : summary.trials) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%llu,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.trial, static_cast<unsigned long long>(r.seed), r.ok ? 1 : 0,
                  r.convergence.converged ? 1 : 0, r.convergence.periods_to_converge,
                  r.convergence.steady_state_mean, r.convergence.steady_state_std,
                  r.posture.height.mean, r.posture.pitch.mean, r.posture.roll.mean,
                  r.posture.forward_displacement, r.posture.mean_speed,
                  r.measured_period);
    csv += buf;
  }
  write_text(config.out_dir + "/aggregate.csv", csv);

  if (summary.n_failed > 0)
    log_warn(std::to_string(summary.n_failed) + " of " +
             std::to_string(summary.n_trials) + " trials failed");
  return summary;
}

void export_plot_data(const std::string& batch_dir) {
  if (!fs::is_directory(batch_dir))
    throw std::invalid_argument("export: not a directory: " + batch_dir);

  // How many trials should exist? Prefer the aggregate's count; otherwise
  // take the trial_* directories present.
  int expected = 0;
  const std::string agg_path = batch_dir + "/aggregate.json";
  if (fs::exists(agg_path)) {
    std::ifstream in(agg_path);
    json agg = json::parse(in);
    expected = agg.value("n_trials", 0);
  } else {
    while (fs::is_directory(batch_dir + "/" + trial_dir_name(expected))) ++expected;
  }
  if (expected <= 0)
    throw std::invalid_argument("export: no trial artifacts in " + batch_dir);

  // A trial is accounted for if its report exists; a trial that ran OK must
  // also have its trajectory and phase series on disk.
  std::vector<std::string> missing;
  struct TrialFiles {
    int index;
    std::string dir;
    bool posture_valid;
  };
  std::vector<TrialFiles> trials;
  for (int i = 0; i < expected; ++i) {
    const std::string dir = batch_dir + "/" + trial_dir_name(i);
    const std::string report_path = dir + "/report.json";
    if (!fs::exists(report_path)) {
      missing.push_back(trial_dir_name(i) + "/report.json");
      continue;
    }
    std::ifstream in(report_path);
    const json rep = json::parse(in);
    if (!rep.value("ok", false)) continue;  // failed trial, documented by its report
    bool complete = true;
    for (const char* f : {"/trajectory.csv", "/phase_error.csv"}) {
      if (!fs::exists(dir + f)) {
        missing.push_back(trial_dir_name(i) + f);
        complete = false;
      }
    }
    if (complete)
      trials.push_back({i, dir, rep.at("posture").value("valid", false)});
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw std::invalid_argument("export: missing artifacts: " + list);
  }

  std::ofstream phase_out(batch_dir + "/phase_error_long.csv");
  std::ofstream posture_out(batch_dir + "/posture_long.csv");
  std::ofstream feet_out(batch_dir + "/feet_long.csv");
  if (!phase_out || !posture_out || !feet_out)
    throw std::runtime_error("export: cannot write tables in " + batch_dir);
  phase_out << "trial,t,phase_error\n";
  posture_out << "trial,t,height,pitch,roll\n";
  feet_out << "trial,foot,t,x,z\n";

  for (const TrialFiles& tf : trials) {
    std::ifstream phase_in(tf.dir + "/phase_error.csv");
    std::string line;
    while (std::getline(phase_in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto f = split_csv(line);
      if (f.size() == 3) phase_out << tf.index << ',' << f[0] << ',' << f[2] << '\n';
    }

    std::ifstream traj_in(tf.dir + "/trajectory.csv");
    while (std::getline(traj_in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto f = split_csv(line);
      if (f.size() == 7) {  // body row: t,OG_x,OG_y,OG_z,height,pitch,roll
        if (tf.posture_valid)
          posture_out << tf.index << ',' << f[0] << ',' << f[4] << ',' << f[5] << ','
                      << f[6] << '\n';
      } else if (f.size() == 18) {  // segment row
        feet_out << tf.index << ",seg" << f[1] << "_L," << f[0] << ',' << f[5] << ','
                 << f[7] << '\n';
        feet_out << tf.index << ",seg" << f[1] << "_R," << f[0] << ',' << f[8] << ','
                 << f[10] << '\n';
      }
    }
  }
}

}  // namespace polyped
