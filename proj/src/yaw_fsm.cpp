#include "polyped/yaw_fsm.h"

#include <algorithm>
#include <stdexcept>

namespace polyped {

namespace {

// The stroke a SYNC state is waiting to see its predecessor enter. Adjacent
// segments run opposite strokes, so SYNC_A releases on STROKE_B and vice versa.
YawPhase release_trigger(YawPhase sync_phase) {
  return sync_phase == YawPhase::SyncA ? YawPhase::StrokeB : YawPhase::StrokeA;
}

bool lifts_right(YawPhase stroke, const ControlParams& params) {
  const bool stroke_a = (stroke == YawPhase::StrokeA);
  return stroke_a == params.lift_right_on_positive_yaw;
}

}  // namespace

bool in_stroke(YawPhase phase) {
  return phase == YawPhase::StrokeA || phase == YawPhase::StrokeB;
}

bool sync_release_gate(const SegmentController& self, const SegmentController& pred,
                       double t, const ControlParams& params) {
  (void)t;
  (void)params;
  if (in_stroke(self.yaw.phase)) return false;
  return pred.yaw.phase == release_trigger(self.yaw.phase);
}

double swing_drop_threshold(const ControlParams& params, int segment_index) {
  const double lowest = -0.9 * params.yaw_amplitude;
  return std::max(params.yaw_threshold - segment_index * params.sync_lead, lowest);
}

YawStepResult step_yaw_fsm(const SegmentController& seg, const SensorSnapshot& snapshot,
                           const ControlParams& params) {
  YawStepResult out;
  out.yaw = seg.yaw;
  out.yaw_setpoint = seg.yaw_setpoint;

  const double t = snapshot.t;
  auto enter_stroke = [&](YawPhase stroke) {
    out.yaw.phase = stroke;
    out.yaw.sub = StrokeSub::WaitRise;
    out.yaw.entered_at = t;
    out.yaw.sub_entered_at = t;
    if (lifts_right(stroke, params))
      out.right_event = LegEvent::Lift;
    else
      out.left_event = LegEvent::Lift;
  };
  auto enter_sync = [&](YawPhase sync_phase) {
    out.yaw.phase = sync_phase;
    out.yaw.entered_at = t;
    out.yaw.sub_entered_at = t;
  };

  const YawPhase phase = seg.yaw.phase;
  if (!in_stroke(phase)) {
    if (snapshot.predecessor_in_stroke)
      enter_stroke(phase == YawPhase::SyncA ? YawPhase::StrokeA : YawPhase::StrokeB);
    return out;
  }

  const bool stroke_a = (phase == YawPhase::StrokeA);
  const bool right_swings = lifts_right(phase, params);
  const LegFsmState& swing_leg = right_swings ? seg.right_leg : seg.left_leg;
  auto emit_to_swing_leg = [&](LegEvent event) {
    if (right_swings)
      out.right_event = event;
    else
      out.left_event = event;
  };

  switch (seg.yaw.sub) {
    case StrokeSub::WaitRise:
      if (swing_leg.phase == LegPhase::Ready &&
          t - seg.yaw.sub_entered_at >= params.wait_rise_delay) {
        out.yaw.sub = StrokeSub::Swing;
        out.yaw.sub_entered_at = t;
        // The yaw sweep itself happens in SWING; until here the joint holds.
        out.yaw_setpoint = stroke_a ? params.yaw_amplitude : -params.yaw_amplitude;
      }
      break;

    case StrokeSub::Swing: {
      const double drop_at = swing_drop_threshold(params, seg.segment_index);
      const bool past_threshold =
          stroke_a ? snapshot.psi >= drop_at : snapshot.psi <= -drop_at;
      if (past_threshold) {
        out.yaw.sub = StrokeSub::WaitFall;
        out.yaw.sub_entered_at = t;
        emit_to_swing_leg(LegEvent::Drop);
      }
      break;
    }

    case StrokeSub::WaitFall:
      // The stroke only exits once the swing leg is back in STAND, so a leg
      // can never be stranded mid-RISE here; abort stays a leg-FSM concern.
      if (swing_leg.phase == LegPhase::Stand &&
          t - seg.yaw.sub_entered_at >= params.wait_fall_delay) {
        enter_sync(stroke_a ? YawPhase::SyncB : YawPhase::SyncA);
      }
      break;
  }
  return out;
}

ControllerStep step_controller(const std::vector<SegmentController>& chain,
                               std::vector<SensorSnapshot> snapshots,
                               const ControlParams& params) {
  if (chain.size() != snapshots.size())
    throw std::invalid_argument("step_controller: chain and snapshot sizes differ");

  for (size_t k = 0; k < chain.size(); ++k) {
    snapshots[k].predecessor_in_stroke =
        k == 0 ? true
               : sync_release_gate(chain[k], chain[k - 1], snapshots[k].t, params);
  }

  ControllerStep out;
  out.chain.reserve(chain.size());
  out.setpoints.reserve(chain.size());
  for (size_t k = 0; k < chain.size(); ++k) {
    const SensorSnapshot& snap = snapshots[k];
    YawStepResult yaw_step = step_yaw_fsm(chain[k], snap, params);

    SegmentController seg = chain[k];
    seg.yaw = yaw_step.yaw;
    seg.yaw_setpoint = yaw_step.yaw_setpoint;
    seg.left_leg = step_leg_fsm(chain[k].left_leg,
                                {snap.phi_left, snap.contact_left, snap.t},
                                yaw_step.left_event, params);
    seg.right_leg = step_leg_fsm(chain[k].right_leg,
                                 {snap.phi_right, snap.contact_right, snap.t},
                                 yaw_step.right_event, params);

    out.setpoints.push_back(
        {seg.yaw_setpoint, seg.left_leg.setpoint, seg.right_leg.setpoint});
    out.chain.push_back(seg);
  }
  return out;
}

std::string to_string(const YawFsmState& yaw) {
  switch (yaw.phase) {
    case YawPhase::SyncA: return "SYNC_A";
    case YawPhase::SyncB: return "SYNC_B";
    case YawPhase::StrokeA:
    case YawPhase::StrokeB: {
      std::string name = yaw.phase == YawPhase::StrokeA ? "STROKE_A" : "STROKE_B";
      switch (yaw.sub) {
        case StrokeSub::WaitRise: return name + ".WAIT_RISE";
        case StrokeSub::Swing: return name + ".SWING";
        case StrokeSub::WaitFall: return name + ".WAIT_FALL";
      }
      return name;
    }
  }
  return "?";
}

}  // namespace polyped
