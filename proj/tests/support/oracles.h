#pragma once

// Test-side reference implementations, kept independent of the library code
// they check: a stepwise integrator for velocity profiles, brute-force
// circular statistics, and small random-input helpers.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "polyped/actuation.h"

namespace oracles {

// Integrates the piecewise-constant-acceleration schedule of a planned
// profile stepwise. The update x += v h + a h^2 / 2 is exact while the
// acceleration is constant, so each step is split at the ramp/cruise
// breakpoints it straddles; the result is exact up to rounding at any step
// size, with no closed-form position formula shared with the planner.
struct ProfileIntegrator {
  const polyped::MotionProfile& p;
  double t;    // absolute time
  double pos;
  double vel;

  explicit ProfileIntegrator(const polyped::MotionProfile& profile)
      : p(profile), t(profile.start_time), pos(profile.start_pos), vel(0.0) {}

  double accel_at(double tau) const {  // tau measured from profile start
    const double dir = p.peak_vel >= 0.0 ? 1.0 : -1.0;
    if (tau < p.t_acc) return dir * p.accel;
    if (tau < p.t_acc + p.t_cruise) return 0.0;
    if (tau < p.t_acc + p.t_cruise + p.t_dec) return -dir * p.accel;
    return 0.0;
  }

  void advance(double dt) {
    double remaining = dt;
    while (remaining > 1e-18) {
      const double tau = t - p.start_time;
      double h = remaining;
      for (double b : {p.t_acc, p.t_acc + p.t_cruise, p.duration()})
        if (tau < b - 1e-15) h = std::min(h, b - tau);
      const double a = accel_at(tau + 0.5 * h);  // sample inside the piece
      pos += vel * h + 0.5 * a * h * h;
      vel += a * h;
      t += h;
      remaining -= h;
    }
  }
};

// Circular mean of a set of angles.
inline double circular_mean(const std::vector<double>& angles) {
  std::complex<double> acc(0.0, 0.0);
  for (double a : angles) acc += std::exp(std::complex<double>(0.0, a));
  return std::arg(acc);
}

// Even/odd phase difference computed the long way: per-class circular means
// taken independently, then their circular difference mapped into (-pi, pi].
inline double even_odd_brute_force(const std::vector<double>& phases) {
  std::vector<double> even, odd;
  for (size_t k = 0; k < phases.size(); ++k)
    (k % 2 == 0 ? even : odd).push_back(phases[k]);
  double d = circular_mean(even) - circular_mean(odd);
  while (d > M_PI) d -= 2.0 * M_PI;
  while (d <= -M_PI) d += 2.0 * M_PI;
  return d;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace oracles
