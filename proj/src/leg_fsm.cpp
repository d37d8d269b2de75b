#include "polyped/leg_fsm.h"

#include <algorithm>
#include <cmath>

namespace polyped {

namespace {
constexpr double kHardwareMin = -M_PI / 2.0;
}

double apply_touchdown_offset(double roll_at_contact, const ControlParams& params) {
  return std::clamp(roll_at_contact - params.touchdown_offset, kHardwareMin,
                    params.leg_up);
}

LegFsmState step_leg_fsm(const LegFsmState& leg, const LegSensors& sensors,
                         LegEvent activation, const ControlParams& params) {
  LegFsmState next = leg;
  auto enter = [&](LegPhase phase, double setpoint) {
    next.phase = phase;
    next.entered_at = sensors.t;
    next.setpoint = setpoint;
  };

  switch (leg.phase) {
    case LegPhase::Stand:
      if (activation == LegEvent::Lift) enter(LegPhase::Rise, params.leg_up);
      break;

    case LegPhase::Rise:
      if (activation == LegEvent::Drop || activation == LegEvent::Abort) {
        // Drop mid-rise (or a premature stroke exit) goes straight to FALL so
        // the leg can never dead-lock waiting for READY.
        enter(LegPhase::Fall, params.leg_down);
      } else if (sensors.roll >= params.leg_up_threshold) {
        enter(LegPhase::Ready, leg.setpoint);
      }
      break;

    case LegPhase::Ready:
      if (activation == LegEvent::Drop) enter(LegPhase::Fall, params.leg_down);
      break;

    case LegPhase::Fall:
      if (sensors.contact) {
        enter(LegPhase::Stand, apply_touchdown_offset(sensors.roll, params));
      } else if (sensors.roll <= params.leg_down) {
        enter(LegPhase::Stand, leg.setpoint);
      }
      break;
  }
  return next;
}

const char* to_string(LegPhase phase) {
  switch (phase) {
    case LegPhase::Stand: return "STAND";
    case LegPhase::Rise: return "RISE";
    case LegPhase::Ready: return "READY";
    case LegPhase::Fall: return "FALL";
  }
  return "?";
}

}  // namespace polyped
