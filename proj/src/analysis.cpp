#include "polyped/analysis.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "polyped/log.h"

namespace polyped {

namespace {
constexpr int kFourierOrder = 5;

std::vector<double> normalize_channel(std::vector<double> xs) {
  const Stats st = series_stats(xs);
  for (double& x : xs) x = (x - st.mean) / st.std;
  return xs;
}
}  // namespace

Stats series_stats(const std::vector<double>& xs) {
  Stats st;
  if (xs.empty()) return st;
  for (double x : xs) st.mean += x;
  st.mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - st.mean) * (x - st.mean);
  st.std = std::sqrt(acc / static_cast<double>(xs.size()));
  return st;
}

double wrap_angle(double a) {
  double r = std::fmod(a + M_PI, 2.0 * M_PI);
  if (r <= 0.0) r += 2.0 * M_PI;
  return r - M_PI;
}

std::vector<std::vector<double>> build_phase_signal(const Trajectory& traj, int segment) {
  if (traj.records.size() < 2)
    throw std::invalid_argument("build_phase_signal: trajectory too short");
  if (segment < 0 || segment >= traj.n_segments)
    throw std::invalid_argument("build_phase_signal: segment out of range");

  const size_t n = traj.records.size() - 1;  // skip the initialization record
  std::vector<std::vector<double>> channels(7, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    const TrajectoryRecord& rec = traj.records[i + 1];
    const SegmentRecord& s = rec.segments[segment];
    const Eigen::Vector3d rel_l = s.foot_left - rec.body.origin;
    const Eigen::Vector3d rel_r = s.foot_right - rec.body.origin;
    channels[0][i] = rel_l.dot(rec.body.forward);
    channels[1][i] = rel_l.dot(rec.body.up);
    channels[2][i] = rel_r.dot(rec.body.forward);
    channels[3][i] = rel_r.dot(rec.body.up);
    channels[4][i] = s.yaw;
    channels[5][i] = s.roll_left;
    channels[6][i] = s.roll_right;
  }

  std::vector<std::vector<double>> kept;
  for (size_t c = 0; c < channels.size(); ++c) {
    if (series_stats(channels[c]).std < 1e-12) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "phase signal: dropping constant channel %zu", c);
      log_warn(buf);
      continue;
    }
    kept.push_back(normalize_channel(std::move(channels[c])));
  }
  return kept;
}

std::vector<double> estimate_phase(const std::vector<std::vector<double>>& raw_channels) {
  std::vector<std::vector<double>> channels;
  for (const auto& ch : raw_channels)
    if (series_stats(ch).std >= 1e-12) channels.push_back(normalize_channel(ch));
  if (channels.size() < 2)
    throw std::invalid_argument("estimate_phase: need >= 2 non-constant channels");
  const size_t n = channels[0].size();
  for (const auto& ch : channels)
    if (ch.size() != n) throw std::invalid_argument("estimate_phase: ragged channels");

  const int dim = static_cast<int>(channels.size());
  Eigen::MatrixXd data(n, dim);
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < n; ++i) data(i, c) = channels[c][i];

  Eigen::MatrixXd cov = data.transpose() * data / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  // Canonical eigenvector orientation so segments with the same cycle shape
  // get the same basis (their phases stay mutually comparable).
  auto oriented = [&](int col) {
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    int imax = 0;
    for (int i = 1; i < dim; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    return v[imax] < 0.0 ? Eigen::VectorXd(-v) : v;
  };
  const Eigen::VectorXd v1 = oriented(dim - 1);
  const Eigen::VectorXd v2 = oriented(dim - 2);
  const double l1 = std::max(eig.eigenvalues()[dim - 1], 1e-300);
  const double l2 = std::max(eig.eigenvalues()[dim - 2], 1e-300);

  const Eigen::VectorXd s1 = data * v1 / std::sqrt(l1);
  const Eigen::VectorXd s2 = data * v2 / std::sqrt(l2);

  std::vector<double> theta(n);
  theta[0] = std::atan2(s2[0], s1[0]);
  for (size_t i = 1; i < n; ++i) {
    const double raw = std::atan2(s2[i], s1[i]);
    theta[i] = theta[i - 1] + wrap_angle(raw - theta[i - 1]);
  }
  if (theta.back() < theta.front())
    for (double& x : theta) x = -x;

  const double span = theta.back() - theta.front();
  if (span < 2.0 * 2.0 * M_PI * 0.98)
    throw std::invalid_argument("estimate_phase: signal spans fewer than 2 cycles");

  // Uniformizing correction: fit a linear trend to the unwrapped angle and
  // remove the cycle-periodic part of the residual (a Fourier series in the
  // trend angle, up to order kFourierOrder). The plane angle's speed varies
  // around the cycle -- it stalls outright while the underlying machine sits
  // in a hold state -- and that variation is exactly the periodic residual,
  // so subtracting it restores a constant mean angular velocity over steady
  // cycling while keeping one full turn per cycle.
  const double nd = static_cast<double>(n);
  double si = 0.0, sii = 0.0, st = 0.0, sit = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    si += x;
    sii += x * x;
    st += theta[i];
    sit += x * theta[i];
  }
  const double slope = (nd * sit - si * st) / (nd * sii - si * si);
  const double intercept = (st - slope * si) / nd;

  const int nb = 2 * kFourierOrder + 1;
  Eigen::MatrixXd basis(n, nb);
  Eigen::VectorXd resid(n);
  for (size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double psi = slope * static_cast<double>(i) + intercept;
    basis(r, 0) = 1.0;
    for (int k = 1; k <= kFourierOrder; ++k) {
      basis(r, 2 * k - 1) = std::cos(k * psi);
      basis(r, 2 * k) = std::sin(k * psi);
    }
    resid(r) = theta[i] - psi;
  }
  const Eigen::VectorXd coef =
      (basis.transpose() * basis).ldlt().solve(basis.transpose() * resid);

  std::vector<double> phi(n);
  for (size_t i = 0; i < n; ++i)
    phi[i] = theta[i] - basis.row(static_cast<Eigen::Index>(i)).dot(coef);
  return phi;
}

PhaseSeries trajectory_phases(const Trajectory& traj) {
  PhaseSeries out;
  if (traj.records.size() < 2)
    throw std::invalid_argument("trajectory_phases: trajectory too short");
  out.t0 = traj.records[1].t;
  out.dt = traj.dt;
  for (int k = 0; k < traj.n_segments; ++k) {
    std::vector<double> phi = estimate_phase(build_phase_signal(traj, k));
    // Each segment's raw phase carries an arbitrary offset set by its own
    // loop geometry (the head's differs from the body segments'). Anchor the
    // offset to the steering rhythm, which every segment shares: rotate the
    // phase so the fundamental of the yaw angle lands at angle zero. Phase
    // differences between segments then reflect actual time lags.
    std::complex<double> fund(0.0, 0.0);
    double yaw_mean = 0.0;
    for (size_t i = 0; i < phi.size(); ++i)
      yaw_mean += traj.records[i + 1].segments[k].yaw;
    yaw_mean /= static_cast<double>(phi.size());
    for (size_t i = 0; i < phi.size(); ++i)
      fund += (traj.records[i + 1].segments[k].yaw - yaw_mean) *
              std::exp(std::complex<double>(0.0, -phi[i]));
    if (std::abs(fund) > 1e-9 * static_cast<double>(phi.size())) {
      const double shift = std::arg(fund);
      for (double& p : phi) p += shift;
    }
    // Residual: deviation of the phase from its own linear trend.
    const size_t n = phi.size();
    const double rate = (phi.back() - phi.front()) / static_cast<double>(n - 1);
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = phi[i] - (phi.front() + rate * static_cast<double>(i));
      acc += d * d;
    }
    out.residuals.push_back(std::sqrt(acc / static_cast<double>(n)));
    out.phases.push_back(std::move(phi));
  }
  return out;
}

std::vector<double> even_odd_phase_difference(const PhaseSeries& phases) {
  const size_t n_seg = phases.phases.size();
  if (n_seg < 2)
    throw std::invalid_argument("even_odd_phase_difference: need both parity classes");
  const size_t n = phases.phases[0].size();

  std::vector<double> delta(n);
  for (size_t i = 0; i < n; ++i) {
    std::complex<double> even(0.0, 0.0), odd(0.0, 0.0);
    for (size_t k = 0; k < n_seg; ++k) {
      const std::complex<double> ph =
          std::exp(std::complex<double>(0.0, phases.phases[k][i]));
      if (k % 2 == 0)
        even += ph;
      else
        odd += ph;
    }
    double d = std::arg(even * std::conj(odd));
    if (d <= -M_PI) d += 2.0 * M_PI;
    delta[i] = d;
  }
  return delta;
}

std::vector<double> phase_error(const std::vector<double>& delta, double target) {
  std::vector<double> e(delta.size());
  for (size_t i = 0; i < delta.size(); ++i)
    e[i] = std::abs(wrap_angle(delta[i] - target));
  return e;
}

ConvergenceReport convergence_report(const std::vector<double>& error, double t0,
                                     double dt, double period_estimate, double tol) {
  if (period_estimate <= 0.0)
    throw std::invalid_argument("convergence_report: period_estimate must be > 0");
  if (error.empty() || dt <= 0.0)
    throw std::invalid_argument("convergence_report: empty series");
  const double span = static_cast<double>(error.size() - 1) * dt;
  if (span < 5.0 * period_estimate)
    throw std::invalid_argument("convergence_report: series shorter than 5 periods");

  const size_t win = std::max<size_t>(1, std::llround(period_estimate / dt));
  ConvergenceReport rep;

  size_t run = 0;
  for (size_t i = 0; i < error.size(); ++i) {
    run = error[i] < tol ? run + 1 : 0;
    if (run >= win) {
      rep.converged = true;
      const size_t start = i + 1 - win;
      rep.periods_to_converge = (t0 + static_cast<double>(start) * dt) / period_estimate;
      break;
    }
  }

  const size_t tail = std::min(error.size(), 3 * win);
  const std::vector<double> steady(error.end() - tail, error.end());
  const Stats st = series_stats(steady);
  rep.steady_state_mean = st.mean;
  rep.steady_state_std = st.std;
  return rep;
}

PostureReport posture_report(const Trajectory& traj) {
  PostureReport rep;
  if (traj.records.size() < 2) return rep;
  rep.valid = traj.posture_valid;

  const size_t first = 1;
  const size_t half = std::max(first, traj.records.size() / 2);
  std::vector<double> heights, pitches, rolls;
  for (size_t i = half; i < traj.records.size(); ++i) {
    heights.push_back(traj.records[i].body.height);
    pitches.push_back(traj.records[i].body.pitch);
    rolls.push_back(traj.records[i].body.roll);
  }
  rep.height = series_stats(heights);
  rep.pitch = series_stats(pitches);
  rep.roll = series_stats(rolls);

  Eigen::Vector3d heading = Eigen::Vector3d::Zero();
  for (size_t i = first; i < traj.records.size(); ++i) {
    Eigen::Vector3d f = traj.records[i].body.forward;
    f.z() = 0.0;
    heading += f;
  }
  if (heading.norm() > 1e-12) heading.normalize();

  Eigen::Vector3d disp =
      traj.records.back().body.origin - traj.records[first].body.origin;
  disp.z() = 0.0;
  rep.forward_displacement = disp.dot(heading);
  const double elapsed = traj.records.back().t - traj.records[first].t;
  rep.mean_speed = elapsed > 0.0 ? rep.forward_displacement / elapsed : 0.0;
  return rep;
}

double measured_stroke_period(const Trajectory& traj, int segment) {
  std::vector<double> entries;
  for (size_t i = 1; i < traj.records.size(); ++i) {
    const YawPhase prev = traj.records[i - 1].segments[segment].yaw_state.phase;
    const YawPhase cur = traj.records[i].segments[segment].yaw_state.phase;
    if (cur == YawPhase::StrokeA && prev != YawPhase::StrokeA)
      entries.push_back(traj.records[i].t);
  }
  if (entries.size() < 3)
    throw std::invalid_argument("measured_stroke_period: fewer than 3 stroke entries");
  return (entries.back() - entries.front()) / static_cast<double>(entries.size() - 1);
}

}  // namespace polyped
