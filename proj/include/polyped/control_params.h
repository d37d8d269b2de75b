#pragma once

#include <stdexcept>
#include <string>

namespace polyped {

// Gait controller parameters. Angles in rad, times in seconds.
// Defaults give the stock alternating-tripod gait.
struct ControlParams {
  double yaw_amplitude = 0.6;       // stroke sweeps between +/- this yaw angle
  double yaw_threshold = 0.55;      // |yaw| >= this ends SWING and drops the leg
  double leg_up = -0.1;             // roll setpoint for a lifted leg
  double leg_up_threshold = -0.15;  // roll >= this marks the leg READY
  double leg_down = -1.0;           // roll setpoint for a dropping leg
  double touchdown_offset = 0.6;    // extra downward roll commanded on contact
  double wait_rise_delay = 0.1;     // minimum dwell in WAIT_RISE
  double wait_fall_delay = 0.1;     // minimum dwell in WAIT_FALL
  double yaw_speed_max = 8.168140899333462;  // 78 RPM servo no-load speed
  double leg_speed_max = 8.168140899333462;
  double profile_accel = 50.0;      // velocity-profile accel limit, rad/s^2
  bool lift_right_on_positive_yaw = true;  // swing-side convention (mirror flag)
  // Per-position advance of the drop threshold down the chain. Each segment
  // ends SWING slightly earlier in the sweep than its predecessor, so its
  // natural cycle is a touch shorter and the SYNC gate engages every cycle
  // instead of free-running; the gate then pins neighbors to exact anti-phase.
  // The head keeps the nominal threshold, so it alone sets the gait period.
  double sync_lead = 0.03;

  void validate() const;
};

inline void ControlParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("ControlParams: " + what);
  };
  if (!(-yaw_amplitude < yaw_threshold && yaw_threshold < yaw_amplitude))
    fail("yaw_threshold must lie strictly inside (-yaw_amplitude, yaw_amplitude)");
  if (!(leg_down < leg_up_threshold && leg_up_threshold < leg_up && leg_up <= 0.0))
    fail("need leg_down < leg_up_threshold < leg_up <= 0");
  if (touchdown_offset < 0.0 || touchdown_offset >= -leg_down)
    fail("touchdown_offset must lie in [0, -leg_down)");
  if (wait_rise_delay < 0.0 || wait_fall_delay < 0.0) fail("wait delays must be >= 0");
  if (sync_lead < 0.0) fail("sync_lead must be >= 0");
  if (yaw_speed_max <= 0.0 || leg_speed_max <= 0.0) fail("speed limits must be > 0");
  if (profile_accel <= 0.0) fail("profile_accel must be > 0");
}

}  // namespace polyped
