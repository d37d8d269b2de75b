// Command-line front end: single runs, seeded batches, config validation,
// and plot-data export. Flag values override config-file values, which
// override built-in defaults.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "polyped/experiment.h"
#include "polyped/log.h"

namespace {

struct CliValues {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  double duration = 30.0;
  int segments = 3;
  std::string terrain_name;
  int trials = 1;
  bool floating = false;
};

void add_common_options(CLI::App* sub, CliValues& v) {
  sub->add_option("--config", v.config_path, "JSON config file");
  sub->add_option("--out", v.out_dir, "output directory");
  sub->add_option("--seed", v.seed, "base seed (trial i uses base_seed + i)");
  sub->add_option("--duration", v.duration, "trial duration in seconds");
  sub->add_option("--segments", v.segments, "number of body segments");
  sub->add_option("--terrain", v.terrain_name, "floating|flat|rough|hill|stairs");
  sub->add_option("--trials", v.trials, "number of trials");
  sub->add_flag("--floating", v.floating,
                "zero-gravity run with no ground (sets terrain and gravity)");
}

polyped::ExperimentConfig merge_config(const CLI::App* sub, const CliValues& v) {
  polyped::ExperimentConfig cfg;
  if (sub->count("--config")) cfg = polyped::parse_config(v.config_path);
  if (sub->count("--out")) cfg.out_dir = v.out_dir;
  if (sub->count("--seed")) cfg.base_seed = v.seed;
  if (sub->count("--duration")) cfg.duration = v.duration;
  if (sub->count("--segments")) cfg.robot.n_segments = v.segments;
  if (sub->count("--terrain"))
    cfg.terrain.kind = polyped::terrain_kind_from_string(v.terrain_name);
  if (sub->count("--trials")) cfg.n_trials = v.trials;
  if (v.floating) {
    cfg.terrain.kind = polyped::TerrainKind::Floating;
    cfg.sim.gravity = 0.0;
  }
  cfg.validate();
  return cfg;
}

void print_report(const polyped::TrialReport& r) {
  std::printf("trial %d (seed %llu): %s\n", r.trial,
              static_cast<unsigned long long>(r.seed), r.ok ? "ok" : "FAILED");
  if (!r.ok) {
    std::printf("  error: %s\n", r.error.c_str());
    return;
  }
  std::printf("  cycle period: %.4g s estimated, %.4g s measured\n", r.period_estimate,
              r.measured_period);
  if (r.phase_ok)
    std::printf("  phase: converged=%s, periods_to_converge=%.3g, steady error %.4g +/- %.4g rad\n",
                r.convergence.converged ? "yes" : "no", r.convergence.periods_to_converge,
                r.convergence.steady_state_mean, r.convergence.steady_state_std);
  else
    std::printf("  phase: no verdict (run too short for estimation)\n");
  if (r.posture.valid)
    std::printf("  posture: height %.4g m, pitch %.4g rad, roll %.4g rad; "
                "forward displacement %.4g m (%.4g m/s)\n",
                r.posture.height.mean, r.posture.pitch.mean, r.posture.roll.mean,
                r.posture.forward_displacement, r.posture.mean_speed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyped: segment-chain gait simulator and analysis runner"};
  app.require_subcommand(1);

  CliValues v;
  CLI::App* run = app.add_subcommand("run", "run one trial and write its artifacts");
  CLI::App* batch = app.add_subcommand("batch", "run a seeded batch of trials");
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a config and print the effective values");
  std::string export_dir;
  CLI::App* export_cmd =
      app.add_subcommand("export", "emit long-format plot tables from a batch directory");
  add_common_options(run, v);
  add_common_options(batch, v);
  add_common_options(validate_cmd, v);
  export_cmd->add_option("dir", export_dir, "batch directory (defaults to --out)");
  export_cmd->add_option("--out", v.out_dir, "batch directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const polyped::ExperimentConfig cfg = merge_config(run, v);
      const polyped::TrialReport rep = polyped::run_trial_to_dir(cfg, 0, cfg.out_dir);
      print_report(rep);
      std::printf("artifacts in %s\n", cfg.out_dir.c_str());
      return rep.ok ? 0 : 1;
    }
    if (batch->parsed()) {
      const polyped::ExperimentConfig cfg = merge_config(batch, v);
      const polyped::BatchSummary s = polyped::run_batch(cfg);
      for (const auto& rep : s.trials) print_report(rep);
      std::printf("batch: %d trials, %d failed, convergence rate %.3g, "
                  "median periods to converge %.3g\n",
                  s.n_trials, s.n_failed, s.convergence_rate,
                  s.median_periods_to_converge);
      std::printf("artifacts in %s\n", cfg.out_dir.c_str());
      return s.n_failed == 0 ? 0 : 1;
    }
    if (validate_cmd->parsed()) {
      const polyped::ExperimentConfig cfg = merge_config(validate_cmd, v);
      std::fputs(polyped::config_to_json_text(cfg).c_str(), stdout);
      std::fprintf(stderr, "config OK\n");
      return 0;
    }
    if (export_cmd->parsed()) {
      std::string dir = export_dir.empty() ? v.out_dir : export_dir;
      if (dir.empty())
        throw std::invalid_argument("export: give a batch directory (positional or --out)");
      polyped::export_plot_data(dir);
      std::printf("wrote plot tables in %s\n", dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
