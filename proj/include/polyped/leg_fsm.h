#pragma once

#include <string>

#include "polyped/control_params.h"

namespace polyped {

// One leg's 4-state roll cycle. STAND holds the last touchdown pose; RISE and
// FALL track the up/down setpoints; READY marks a lifted leg awaiting the
// yaw swing.
enum class LegPhase { Stand, Rise, Ready, Fall };

// Command from the segment's yaw FSM to a leg FSM.
enum class LegEvent { None, Lift, Drop, Abort };

struct LegFsmState {
  LegPhase phase = LegPhase::Stand;
  double entered_at = 0.0;  // time the current phase was entered
  double setpoint = 0.0;    // commanded roll for this leg's servo
};

// Per-leg sensing for one control tick.
struct LegSensors {
  double roll = 0.0;     // measured roll angle
  bool contact = false;  // load-bearing ground contact
  double t = 0.0;
};

// Touchdown rule: press the foot a bit further down than where contact
// happened, clamped to the hardware stop and never above the lifted pose.
double apply_touchdown_offset(double roll_at_contact, const ControlParams& params);

// Advances one leg FSM by one tick. Pure: the returned state is the complete
// successor. Events take priority over threshold conditions.
LegFsmState step_leg_fsm(const LegFsmState& leg, const LegSensors& sensors,
                         LegEvent activation, const ControlParams& params);

const char* to_string(LegPhase phase);

}  // namespace polyped
