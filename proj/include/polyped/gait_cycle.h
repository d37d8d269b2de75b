#pragma once

#include <cstdint>
#include <random>

#include "polyped/actuation.h"
#include "polyped/control_params.h"
#include "polyped/yaw_fsm.h"

namespace polyped {

// Closed-form decomposition of one free-running (no-contact) gait cycle.
// A half cycle is one stroke: WAIT_RISE until the swing leg is READY and the
// dwell has elapsed, SWING until the yaw crosses its threshold, WAIT_FALL
// until the leg is back down and the dwell has elapsed. SYNC has zero width
// in this continuous-time picture (the pacemaker releases immediately).
struct CycleTimeline {
  double rise_to_ready = 0.0;  // leg_down -> crossing leg_up_threshold
  double rise_full = 0.0;      // leg_down -> leg_up
  double fall_full = 0.0;      // leg_up -> leg_down
  double swing_to_threshold = 0.0;  // -amp -> crossing +threshold
  double wait_rise = 0.0;      // max(rise_to_ready, wait_rise_delay)
  double wait_fall = 0.0;      // max(fall_full, wait_fall_delay)
  double half_period = 0.0;
  double period = 0.0;
};

// Time at which a monotone profile first reaches `pos` (relative to the
// profile start). pos must lie between start_pos and target.
double profile_time_to_position(const MotionProfile& profile, double pos);

CycleTimeline compute_cycle_timeline(const ControlParams& params,
                                     const MotorLimits& yaw_motor,
                                     const MotorLimits& leg_motor);

// The analysis modules compare convergence times in units of this period.
double estimate_cycle_period(const ControlParams& params, const MotorLimits& yaw_motor,
                             const MotorLimits& leg_motor);

// A segment's controller state plus in-flight servo profiles, placed at a
// uniformly random point of the nominal cycle (entry times set in the past so
// the state is exactly mid-cycle at t = 0).
struct SegmentInit {
  SegmentController controller;
  MotionProfile yaw_profile;
  MotionProfile left_profile;
  MotionProfile right_profile;
};

SegmentInit randomize_segment_phase(std::mt19937_64& rng, int segment_index,
                                    const ControlParams& params,
                                    const MotorLimits& yaw_motor,
                                    const MotorLimits& leg_motor);

}  // namespace polyped
