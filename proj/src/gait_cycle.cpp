#include "polyped/gait_cycle.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyped {

double profile_time_to_position(const MotionProfile& profile, double pos) {
  const double total = std::abs(profile.target - profile.start_pos);
  if (total == 0.0) return 0.0;
  const double dir = profile.peak_vel >= 0.0 ? 1.0 : -1.0;
  const double rel = std::clamp((pos - profile.start_pos) * dir, 0.0, total);

  const double a = profile.accel;
  const double ramp_dist = 0.5 * a * profile.t_acc * profile.t_acc;
  if (rel <= ramp_dist) return std::sqrt(2.0 * rel / a);
  const double cruise_speed = std::abs(profile.peak_vel);
  const double cruise_dist = cruise_speed * profile.t_cruise;
  if (rel <= ramp_dist + cruise_dist)
    return profile.t_acc + (rel - ramp_dist) / cruise_speed;
  const double remaining = total - rel;
  return profile.duration() - std::sqrt(2.0 * remaining / a);
}

CycleTimeline compute_cycle_timeline(const ControlParams& params,
                                     const MotorLimits& yaw_motor,
                                     const MotorLimits& leg_motor) {
  CycleTimeline tl;
  const MotionProfile rise = plan_profile(params.leg_down, params.leg_up, leg_motor);
  const MotionProfile fall = plan_profile(params.leg_up, params.leg_down, leg_motor);
  const MotionProfile swing =
      plan_profile(-params.yaw_amplitude, params.yaw_amplitude, yaw_motor);

  tl.rise_full = rise.duration();
  tl.fall_full = fall.duration();
  tl.rise_to_ready = profile_time_to_position(rise, params.leg_up_threshold);
  tl.swing_to_threshold = profile_time_to_position(swing, params.yaw_threshold);
  tl.wait_rise = std::max(tl.rise_to_ready, params.wait_rise_delay);
  tl.wait_fall = std::max(tl.fall_full, params.wait_fall_delay);
  tl.half_period = tl.wait_rise + tl.swing_to_threshold + tl.wait_fall;
  tl.period = 2.0 * tl.half_period;
  return tl;
}

double estimate_cycle_period(const ControlParams& params, const MotorLimits& yaw_motor,
                             const MotorLimits& leg_motor) {
  return compute_cycle_timeline(params, yaw_motor, leg_motor).period;
}

SegmentInit randomize_segment_phase(std::mt19937_64& rng, int segment_index,
                                    const ControlParams& params,
                                    const MotorLimits& yaw_motor,
                                    const MotorLimits& leg_motor) {
  const CycleTimeline tl = compute_cycle_timeline(params, yaw_motor, leg_motor);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double offset = uniform(rng) * tl.period;

  const bool in_stroke_a = offset < tl.half_period;
  const double tau = in_stroke_a ? offset : offset - tl.half_period;
  const double stroke_start = -tau;  // entry time, in the past
  const double amp = in_stroke_a ? params.yaw_amplitude : -params.yaw_amplitude;
  const bool right_swings = in_stroke_a == params.lift_right_on_positive_yaw;

  SegmentInit init;
  SegmentController& seg = init.controller;
  seg.segment_index = segment_index;
  seg.yaw.phase = in_stroke_a ? YawPhase::StrokeA : YawPhase::StrokeB;
  seg.yaw.entered_at = stroke_start;

  // Stance leg: standing since it finished falling in the previous stroke.
  LegFsmState stance;
  stance.phase = LegPhase::Stand;
  stance.entered_at = stroke_start - tl.wait_fall + tl.fall_full;
  stance.setpoint = params.leg_down;
  const MotionProfile stance_profile =
      plan_profile(params.leg_down, params.leg_down, leg_motor, stance.entered_at);

  // Swing leg: lifted at stroke entry; dropped when the yaw crossed threshold.
  const double drop_time = stroke_start + tl.wait_rise + tl.swing_to_threshold;
  const MotionProfile rise_profile =
      plan_profile(params.leg_down, params.leg_up, leg_motor, stroke_start);
  LegFsmState swing_leg;
  MotionProfile swing_leg_profile = rise_profile;
  if (tau < tl.wait_rise + tl.swing_to_threshold) {
    if (tau < tl.rise_to_ready) {
      swing_leg.phase = LegPhase::Rise;
      swing_leg.entered_at = stroke_start;
    } else {
      swing_leg.phase = LegPhase::Ready;
      swing_leg.entered_at = stroke_start + tl.rise_to_ready;
    }
    swing_leg.setpoint = params.leg_up;
  } else {
    const double roll_at_drop = sample_profile(rise_profile, drop_time).pos;
    swing_leg_profile = plan_profile(roll_at_drop, params.leg_down, leg_motor, drop_time);
    if (tau < tl.wait_rise + tl.swing_to_threshold + swing_leg_profile.duration()) {
      swing_leg.phase = LegPhase::Fall;
      swing_leg.entered_at = drop_time;
    } else {
      swing_leg.phase = LegPhase::Stand;
      swing_leg.entered_at = drop_time + swing_leg_profile.duration();
    }
    swing_leg.setpoint = params.leg_down;
  }

  // Yaw: holds the stroke's start angle through WAIT_RISE, sweeps from SWING.
  if (tau < tl.wait_rise) {
    seg.yaw.sub = StrokeSub::WaitRise;
    seg.yaw.sub_entered_at = stroke_start;
    seg.yaw_setpoint = -amp;
    init.yaw_profile = plan_profile(-amp, -amp, yaw_motor, stroke_start);
  } else {
    const double swing_start = stroke_start + tl.wait_rise;
    init.yaw_profile = plan_profile(-amp, amp, yaw_motor, swing_start);
    seg.yaw_setpoint = amp;
    if (tau < tl.wait_rise + tl.swing_to_threshold) {
      seg.yaw.sub = StrokeSub::Swing;
      seg.yaw.sub_entered_at = swing_start;
    } else {
      seg.yaw.sub = StrokeSub::WaitFall;
      seg.yaw.sub_entered_at = drop_time;
    }
  }

  if (right_swings) {
    seg.right_leg = swing_leg;
    seg.left_leg = stance;
    init.right_profile = swing_leg_profile;
    init.left_profile = stance_profile;
  } else {
    seg.left_leg = swing_leg;
    seg.right_leg = stance;
    init.left_profile = swing_leg_profile;
    init.right_profile = stance_profile;
  }
  return init;
}

}  // namespace polyped
