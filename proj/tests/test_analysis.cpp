#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "polyped/analysis.h"
#include "support/oracles.h"

using namespace polyped;

namespace {

constexpr double kTau = 2.0 * M_PI;

// Two-channel limit cycle sampled at the given protophase angles.
std::vector<std::vector<double>> circle_channels(const std::vector<double>& g,
                                                 double scale_x = 1.0,
                                                 double scale_y = 1.0,
                                                 double offset = 0.0) {
  std::vector<std::vector<double>> ch(2, std::vector<double>(g.size()));
  for (size_t i = 0; i < g.size(); ++i) {
    ch[0][i] = scale_x * std::cos(g[i]) + offset;
    ch[1][i] = scale_y * std::sin(g[i]) + offset;
  }
  return ch;
}

std::vector<double> linspace_angles(size_t n, double cycles, double start = 0.0) {
  std::vector<double> g(n);
  for (size_t i = 0; i < n; ++i)
    g[i] = start + cycles * kTau * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

// RMS of a series after removing its mean.
double centered_rms(const std::vector<double>& xs) {
  const Stats st = series_stats(xs);
  return st.std;
}

// A minimal trajectory whose segment k traces a planar foot cycle with phase
// lag `lag[k]`, riding on a body that translates along +x.
Trajectory synthetic_trajectory(int n_segments, const std::vector<double>& lag,
                                size_t n_records, double dt, double period) {
  Trajectory traj;
  traj.dt = dt;
  traj.n_segments = n_segments;
  traj.records.resize(n_records);
  for (size_t i = 0; i < n_records; ++i) {
    TrajectoryRecord& rec = traj.records[i];
    rec.t = static_cast<double>(i) * dt;
    rec.body.origin = Eigen::Vector3d(0.5 * rec.t, 0.0, 0.0);
    rec.body.height = 0.08;
    rec.segments.resize(n_segments);
    for (int k = 0; k < n_segments; ++k) {
      const double g = kTau * rec.t / period - lag[k];
      SegmentRecord& s = rec.segments[k];
      // Channels share the fundamental but carry distinct harmonic content,
      // like real gait signals do; a cycle whose channels are all exact
      // multiples of one sinusoid would leave the principal directions
      // ambiguous (any rotation of the plane fits equally well).
      s.yaw = 0.3 * std::sin(g);
      s.roll_left = -0.6 + 0.25 * std::sin(g) + 0.03 * std::cos(2.0 * g);
      s.roll_right = -0.6 - 0.25 * std::sin(g) + 0.03 * std::cos(2.0 * g);
      s.foot_left = rec.body.origin +
                    Eigen::Vector3d(0.1 * std::cos(g), 0.03,
                                    0.1 * std::sin(g) + 0.02 * std::sin(2.0 * g));
      s.foot_right = rec.body.origin +
                     Eigen::Vector3d(-0.1 * std::cos(g), -0.03,
                                     -0.1 * std::sin(g) - 0.02 * std::sin(2.0 * g));
      s.yaw_state.phase = YawPhase::SyncA;
    }
  }
  return traj;
}

}  // namespace

TEST_CASE("wrap_angle maps onto the half-open interval") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));  // -pi folds to +pi
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(kTau) == doctest::Approx(0.0).scale(1.0));
  CHECK(wrap_angle(-0.4 + 6.0 * kTau) == doctest::Approx(-0.4));
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    CHECK(w > -M_PI);
    CHECK(w <= M_PI);
    CHECK(std::abs(std::remainder(w - a, kTau)) < 1e-9);
  }
}

TEST_CASE("series_stats uses the population convention") {
  const Stats st = series_stats({1.0, 2.0, 3.0, 4.0});
  CHECK(st.mean == doctest::Approx(2.5));
  CHECK(st.std == doctest::Approx(std::sqrt(1.25)));
  const Stats one = series_stats({7.0});
  CHECK(one.mean == 7.0);
  CHECK(one.std == 0.0);
}

TEST_CASE("phase_error measures circular distance to the target") {
  const std::vector<double> delta = {M_PI, 0.0, -M_PI + 0.1, M_PI - 0.2};
  const std::vector<double> e = phase_error(delta, M_PI);
  CHECK(e[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(e[1] == doctest::Approx(M_PI));           // antipode: maximal error
  CHECK(e[2] == doctest::Approx(0.1));            // wraps across the branch cut
  CHECK(e[3] == doctest::Approx(0.2));
  for (double d = -3.0; d <= 3.0; d += 0.1) {     // continuity around the target
    const double a = phase_error({M_PI + d}, M_PI)[0];
    CHECK(a == doctest::Approx(std::abs(wrap_angle(d))).epsilon(1e-12));
  }
}

TEST_CASE("even/odd phase difference") {
  auto delta_of = [](const std::vector<double>& phases) {
    PhaseSeries ps;
    for (double p : phases) ps.phases.push_back({p});
    return even_odd_phase_difference(ps)[0];
  };

  SUBCASE("hand-worked examples") {
    // Even segments at {0, pi/2}, odd at {pi, 3pi/2}: means pi/4 vs -3pi/4.
    CHECK(delta_of({0.0, M_PI, M_PI / 2.0, 1.5 * M_PI}) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(std::abs(delta_of({0.7, 0.7, 0.7, 0.7})) < 1e-12);
    CHECK(delta_of({0.0, M_PI}) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(delta_of({M_PI, 0.0}) == doctest::Approx(M_PI).epsilon(1e-12));
  }

  SUBCASE("the antiphase example lands on the positive branch") {
    // arg is taken in (-pi, pi]; exactly pi must not flip to -pi.
    const double d = delta_of({0.25, 0.25 + M_PI, 0.25, 0.25 + M_PI});
    CHECK(d == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(d > 0.0);
  }

  SUBCASE("matches the brute-force oracle on random phase sets") {
    std::mt19937_64 rng(20260816);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n_seg = 2 + static_cast<int>(rng() % 5);
      std::vector<double> phases;
      for (int k = 0; k < n_seg; ++k)
        phases.push_back(oracles::uniform(rng, -40.0, 40.0));
      const double got = delta_of(phases);
      const double want = oracles::even_odd_brute_force(phases);
      CHECK(got > -M_PI);
      CHECK(got <= M_PI);
      CHECK(std::abs(wrap_angle(got - want)) < 1e-9);
    }
  }
}

TEST_CASE("phase estimation on a uniform circular cycle") {
  const size_t n = 2000;
  const double cycles = 4.0;
  const double step = cycles * kTau / static_cast<double>(n);
  const std::vector<double> g = linspace_angles(n, cycles, 0.3);
  const std::vector<double> phi = estimate_phase(circle_channels(g));

  SUBCASE("advances linearly at the sample rate") {
    for (size_t i = 0; i < n; i += 97) {
      const double expect = static_cast<double>(i) * step;
      CHECK(phi[i] - phi[0] == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
    }
  }

  SUBCASE("start angle only shifts the offset") {
    const std::vector<double> g2 = linspace_angles(n, cycles, 0.3 + 1.0);
    const std::vector<double> phi2 = estimate_phase(circle_channels(g2));
    for (size_t i = 0; i < n; i += 131)
      CHECK(phi2[i] - phi2[0] == doctest::Approx(phi[i] - phi[0]).epsilon(1e-6).scale(1.0));
  }

  SUBCASE("channel gain and offset are normalized away") {
    const std::vector<double> phi2 =
        estimate_phase(circle_channels(g, 3.7, 0.2, 5.0));
    for (size_t i = 0; i < n; i += 131)
      CHECK(phi2[i] - phi2[0] == doctest::Approx(phi[i] - phi[0]).epsilon(1e-7).scale(1.0));
  }

  SUBCASE("constant channels are ignored") {
    auto ch = circle_channels(g);
    ch.push_back(std::vector<double>(n, 42.0));
    const std::vector<double> phi2 = estimate_phase(ch);
    for (size_t i = 0; i < n; i += 131)
      CHECK(phi2[i] - phi2[0] == doctest::Approx(phi[i] - phi[0]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("phase estimation input validation") {
  const std::vector<double> g = linspace_angles(1200, 3.0);
  SUBCASE("fewer than two cycles") {
    const std::vector<double> short_g = linspace_angles(600, 1.5);
    CHECK_THROWS(estimate_phase(circle_channels(short_g)));
  }
  SUBCASE("fewer than two live channels") {
    std::vector<std::vector<double>> ch = {std::vector<double>(1200, 1.0),
                                           circle_channels(g)[0]};
    CHECK_THROWS(estimate_phase(ch));
  }
  SUBCASE("ragged channels") {
    auto ch = circle_channels(g);
    ch[1].pop_back();
    CHECK_THROWS(estimate_phase(ch));
  }
}

TEST_CASE("phase estimation uniformizes a speed-modulated cycle") {
  // The cycle dwells near one angle and rushes past the opposite one; the
  // density correction should recover a phase that advances evenly anyway.
  const size_t n = 8000;
  const double cycles = 8.0;
  std::vector<double> g(n), truth(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = cycles * kTau * static_cast<double>(i) / static_cast<double>(n);
    truth[i] = u;
    g[i] = u + 0.8 * std::sin(u);
  }
  const std::vector<double> phi = estimate_phase(circle_channels(g));

  std::vector<double> err(n);
  for (size_t i = 0; i < n; ++i) err[i] = phi[i] - truth[i];
  CHECK(centered_rms(err) < 0.05);

  const size_t per_cycle = n / static_cast<size_t>(cycles);
  for (size_t i = 0; i + per_cycle < n; i += 503)
    CHECK(phi[i + per_cycle] - phi[i] == doctest::Approx(kTau).epsilon(0.01));

  for (size_t i = 1; i < n; ++i) CHECK(phi[i] - phi[i - 1] > -1e-3);
}

TEST_CASE("phase signal extraction uses the body frame") {
  const Trajectory traj = synthetic_trajectory(1, {0.0}, 801, 0.01, 2.0);
  const auto channels = build_phase_signal(traj, 0);
  REQUIRE(channels.size() == 7);  // every channel varies in this trajectory
  const size_t n = channels[0].size();
  REQUIRE(n == 800);  // the initialization record is skipped

  // Channel 0 is the left foot's forward coordinate in the body frame. The
  // body translates at 0.5 m/s, so the world coordinate would be dominated by
  // the trend; relative to the body it is a pure cosine.
  std::vector<double> expect(n);
  for (size_t i = 0; i < n; ++i)
    expect[i] = 0.1 * std::cos(kTau * traj.records[i + 1].t / 2.0);
  const Stats st = series_stats(expect);
  for (size_t i = 0; i < n; i += 61)
    CHECK(channels[0][i] == doctest::Approx((expect[i] - st.mean) / st.std).epsilon(1e-9));

  SUBCASE("a constant yaw channel is dropped") {
    Trajectory flat_yaw = traj;
    for (auto& rec : flat_yaw.records) rec.segments[0].yaw = 0.7;
    CHECK(build_phase_signal(flat_yaw, 0).size() == 6);
  }
  SUBCASE("segment index is validated") {
    CHECK_THROWS(build_phase_signal(traj, 1));
    CHECK_THROWS(build_phase_signal(traj, -1));
  }
}

TEST_CASE("full pipeline recovers an imposed anti-phase offset") {
  const double period = 1.0;
  const Trajectory traj = synthetic_trajectory(2, {0.0, M_PI}, 601, 0.01, period);
  const PhaseSeries ps = trajectory_phases(traj);
  REQUIRE(ps.phases.size() == 2);
  CHECK(ps.t0 == doctest::Approx(0.01));
  CHECK(ps.residuals[0] < 0.05);
  CHECK(ps.residuals[1] < 0.05);

  const std::vector<double> delta = even_odd_phase_difference(ps);
  const std::vector<double> err = phase_error(delta, M_PI);
  double worst = 0.0;
  for (size_t i = 0; i < err.size(); ++i) worst = std::max(worst, err[i]);
  CHECK(worst < 0.05);
}

TEST_CASE("convergence report") {
  const double dt = 0.01;
  const double period = 1.0;
  const double tol = 0.1;

  SUBCASE("an already-converged series converges at time zero") {
    const std::vector<double> zero(1001, 0.0);
    const ConvergenceReport rep = convergence_report(zero, 0.0, dt, period, tol);
    CHECK(rep.converged);
    CHECK(rep.periods_to_converge == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.steady_state_mean == 0.0);
    CHECK(rep.steady_state_std == 0.0);
  }

  SUBCASE("an exponential decay converges where it crosses the tolerance") {
    // 0.5 exp(-a t) with a chosen so the crossing sits exactly at t = 2.
    const double a = std::log(5.0) / 2.0;
    std::vector<double> e(1001);
    for (size_t i = 0; i < e.size(); ++i)
      e[i] = 0.5 * std::exp(-a * static_cast<double>(i) * dt);
    const ConvergenceReport rep = convergence_report(e, 0.0, dt, period, tol);
    CHECK(rep.converged);
    CHECK(rep.periods_to_converge == doctest::Approx(2.0).epsilon(0.02));
    // The steady window covers the final three periods, so its mean is
    // bracketed by the series values at the window's ends.
    CHECK(rep.steady_state_mean < e[e.size() - 300]);
    CHECK(rep.steady_state_mean > e.back());
  }

  SUBCASE("a series that keeps resurfacing never converges") {
    std::vector<double> e(1001);
    for (size_t i = 0; i < e.size(); ++i) {
      const double t = static_cast<double>(i) * dt;
      e[i] = 0.05 + 0.2 * std::abs(std::sin(M_PI * t / period));  // above tol twice a period
    }
    const ConvergenceReport rep = convergence_report(e, 0.0, dt, period, tol);
    CHECK_FALSE(rep.converged);
  }

  SUBCASE("the start offset shifts the convergence time") {
    const std::vector<double> zero(1001, 0.0);
    const ConvergenceReport rep = convergence_report(zero, 3.0, dt, period, tol);
    CHECK(rep.periods_to_converge == doctest::Approx(3.0));
  }

  SUBCASE("input validation") {
    const std::vector<double> e(1001, 0.0);
    CHECK_THROWS(convergence_report(e, 0.0, dt, 0.0, tol));        // period <= 0
    CHECK_THROWS(convergence_report({}, 0.0, dt, period, tol));    // empty
    CHECK_THROWS(convergence_report(std::vector<double>(400, 0.0), 0.0, dt, period,
                                    tol));                          // < 5 periods
  }
}

TEST_CASE("posture report") {
  SUBCASE("stationary body: clean stats, no displacement") {
    Trajectory traj = synthetic_trajectory(1, {0.0}, 401, 0.01, 2.0);
    for (auto& rec : traj.records) {
      rec.body.origin = Eigen::Vector3d(1.0, 2.0, 0.0);
      rec.body.height = 0.08;
      rec.body.pitch = 0.01;
      rec.body.roll = -0.02;
    }
    const PostureReport rep = posture_report(traj);
    CHECK(rep.valid);
    CHECK(rep.height.mean == doctest::Approx(0.08));
    CHECK(rep.height.std == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.pitch.mean == doctest::Approx(0.01));
    CHECK(rep.roll.mean == doctest::Approx(-0.02));
    CHECK(rep.forward_displacement == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.mean_speed == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("straight-line walk: displacement along the heading") {
    const Trajectory traj = synthetic_trajectory(1, {0.0}, 401, 0.01, 2.0);
    const PostureReport rep = posture_report(traj);
    const double elapsed = traj.records.back().t - traj.records[1].t;
    CHECK(rep.forward_displacement == doctest::Approx(0.5 * elapsed).epsilon(1e-12));
    CHECK(rep.mean_speed == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("a run without a ground reference is flagged invalid") {
    Trajectory traj = synthetic_trajectory(1, {0.0}, 401, 0.01, 2.0);
    traj.posture_valid = false;
    CHECK_FALSE(posture_report(traj).valid);
  }

  SUBCASE("a single record yields an invalid report") {
    Trajectory traj = synthetic_trajectory(1, {0.0}, 1, 0.01, 2.0);
    CHECK_FALSE(posture_report(traj).valid);
  }
}

TEST_CASE("measured stroke period from state entries") {
  Trajectory traj = synthetic_trajectory(1, {0.0}, 1201, 0.01, 2.0);
  // Impose a 1.2 s rhythm: STROKE_A occupies [0.1, 0.5) within each cycle.
  for (auto& rec : traj.records) {
    const double u = std::fmod(rec.t, 1.2);
    auto& st = rec.segments[0].yaw_state;
    if (u < 0.1)
      st.phase = YawPhase::SyncA;
    else if (u < 0.5)
      st.phase = YawPhase::StrokeA;
    else if (u < 0.6)
      st.phase = YawPhase::SyncB;
    else
      st.phase = YawPhase::StrokeB;
  }
  CHECK(measured_stroke_period(traj, 0) == doctest::Approx(1.2).epsilon(1e-9));

  SUBCASE("too few entries") {
    Trajectory short_traj = synthetic_trajectory(1, {0.0}, 150, 0.01, 2.0);
    for (auto& rec : short_traj.records)
      rec.segments[0].yaw_state.phase =
          std::fmod(rec.t, 1.2) < 0.5 ? YawPhase::StrokeA : YawPhase::SyncB;
    CHECK_THROWS(measured_stroke_period(short_traj, 0));
  }
}
