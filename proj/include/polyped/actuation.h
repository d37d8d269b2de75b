#pragma once

#include <cmath>
#include <optional>

namespace polyped {

// Servo envelope. torque_hold is carried along for load audits in logs; the
// kinematic servo model never enforces it.
struct MotorLimits {
  double v_max = 8.168140899333462;  // 78 RPM no-load speed
  double accel = 50.0;
  double torque_hold = 7.3;  // N*m
  double angle_min = -M_PI / 2.0;
  double angle_max = M_PI / 2.0;
};

// Closed-form trapezoidal (or degenerate triangular) velocity profile with
// zero boundary velocities.
struct MotionProfile {
  double start_pos = 0.0;
  double start_time = 0.0;
  double target = 0.0;
  double t_acc = 0.0;
  double t_cruise = 0.0;
  double t_dec = 0.0;
  double peak_vel = 0.0;  // signed
  double accel = 0.0;     // magnitude used for the ramps

  double duration() const { return t_acc + t_cruise + t_dec; }
  double end_time() const { return start_time + duration(); }
};

struct ProfileSample {
  double pos = 0.0;
  double vel = 0.0;
};

// Plans a rest-to-rest move. Targets outside the angle range are clamped (and
// logged). The profile cruises at v_max only when the move is long enough.
MotionProfile plan_profile(double current, double target, const MotorLimits& limits,
                           double start_time = 0.0);

// Piecewise-quadratic position / piecewise-linear velocity; clamps to
// (start_pos, 0) before the start and (target, 0) after the end.
ProfileSample sample_profile(const MotionProfile& profile, double t);

// Retargetable servo: replans from the currently sampled position (velocity
// reset to zero) whenever the setpoint moves by more than 1e-9 rad.
struct ServoState {
  MotionProfile profile;
  MotorLimits limits;

  explicit ServoState(const MotorLimits& motor_limits = {}, double initial_pos = 0.0)
      : limits(motor_limits) {
    profile = plan_profile(initial_pos, initial_pos, limits, 0.0);
  }
};

ProfileSample step_servo(ServoState& servo, std::optional<double> new_setpoint,
                         double t);

}  // namespace polyped
