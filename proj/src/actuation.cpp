#include "polyped/actuation.h"

#include <algorithm>
#include <cstdio>

#include "polyped/log.h"

namespace polyped {

MotionProfile plan_profile(double current, double target, const MotorLimits& limits,
                           double start_time) {
  double clamped = std::clamp(target, limits.angle_min, limits.angle_max);
  if (clamped != target) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "profile target %.4f clamped to %.4f", target,
                  clamped);
    log_warn(buf);
  }

  MotionProfile p;
  p.start_pos = current;
  p.start_time = start_time;
  p.target = clamped;
  p.accel = limits.accel;

  const double dist = std::abs(clamped - current);
  if (dist == 0.0) return p;

  const double dir = clamped > current ? 1.0 : -1.0;
  const double cruise_dist = limits.v_max * limits.v_max / limits.accel;
  if (dist <= cruise_dist) {
    p.t_acc = p.t_dec = std::sqrt(dist / limits.accel);
    p.peak_vel = dir * limits.accel * p.t_acc;
  } else {
    p.t_acc = p.t_dec = limits.v_max / limits.accel;
    p.t_cruise = (dist - cruise_dist) / limits.v_max;
    p.peak_vel = dir * limits.v_max;
  }
  return p;
}

ProfileSample sample_profile(const MotionProfile& profile, double t) {
  const double tau = t - profile.start_time;
  if (tau <= 0.0) return {profile.start_pos, 0.0};
  if (tau >= profile.duration()) return {profile.target, 0.0};

  const double dir = profile.peak_vel >= 0.0 ? 1.0 : -1.0;
  const double a = profile.accel;
  if (tau < profile.t_acc)
    return {profile.start_pos + dir * 0.5 * a * tau * tau, dir * a * tau};

  const double tau_cruise = tau - profile.t_acc;
  if (tau_cruise < profile.t_cruise) {
    const double ramp_dist = 0.5 * a * profile.t_acc * profile.t_acc;
    return {profile.start_pos + dir * (ramp_dist + std::abs(profile.peak_vel) * tau_cruise),
            profile.peak_vel};
  }

  const double remaining = profile.duration() - tau;
  return {profile.target - dir * 0.5 * a * remaining * remaining, dir * a * remaining};
}

ProfileSample step_servo(ServoState& servo, std::optional<double> new_setpoint,
                         double t) {
  if (new_setpoint &&
      std::abs(*new_setpoint - servo.profile.target) > 1e-9) {
    const double here = sample_profile(servo.profile, t).pos;
    servo.profile = plan_profile(here, *new_setpoint, servo.limits, t);
  }
  return sample_profile(servo.profile, t);
}

}  // namespace polyped
