#pragma once

#include <string>
#include <vector>

#include "polyped/control_params.h"
#include "polyped/leg_fsm.h"

namespace polyped {

// Segment-level yaw oscillator: two SYNC gates and two composite STROKE
// states, each stroke sweeping the yaw joint toward one end of its range
// while the opposite-side leg swings.
enum class YawPhase { SyncA, StrokeA, SyncB, StrokeB };
enum class StrokeSub { WaitRise, Swing, WaitFall };

struct YawFsmState {
  YawPhase phase = YawPhase::SyncA;
  StrokeSub sub = StrokeSub::WaitRise;  // valid while phase is a stroke
  double entered_at = 0.0;              // top-level phase entry time
  double sub_entered_at = 0.0;          // sub-state entry time
};

// Full controller state for one segment: yaw oscillator plus its two legs.
struct SegmentController {
  YawFsmState yaw;
  LegFsmState left_leg;
  LegFsmState right_leg;
  double yaw_setpoint = 0.0;
  int segment_index = 0;
};

// One control tick's sensing for a segment. predecessor_in_stroke carries the
// SYNC release gate, computed by step_controller from the pre-step chain.
struct SensorSnapshot {
  double psi = 0.0;       // measured yaw angle
  double phi_left = 0.0;  // measured roll angles
  double phi_right = 0.0;
  bool contact_left = false;  // load-bearing contact flags
  bool contact_right = false;
  bool predecessor_in_stroke = false;
  double t = 0.0;
};

struct YawStepResult {
  YawFsmState yaw;
  double yaw_setpoint = 0.0;
  LegEvent left_event = LegEvent::None;
  LegEvent right_event = LegEvent::None;
};

struct JointSetpoints {
  double yaw = 0.0;
  double left = 0.0;
  double right = 0.0;
};

struct ControllerStep {
  std::vector<SegmentController> chain;
  std::vector<JointSetpoints> setpoints;
};

bool in_stroke(YawPhase phase);

// True when `self`, waiting in a SYNC state, should release: the predecessor
// is currently in the stroke of opposite parity (SYNC_A waits for STROKE_B
// and vice versa). The gate only ever delays a segment, so on its own it
// cannot pull a late follower back; the restoring pull comes from sync_lead
// giving every segment a slightly shorter natural cycle than its predecessor.
// A follower therefore arrives at SYNC a little early each cycle, blocks
// briefly, and is released on the tick its predecessor enters the opposite
// stroke — pinning the pair to anti-phase within one control tick.
bool sync_release_gate(const SegmentController& self, const SegmentController& pred,
                       double t, const ControlParams& params);

// Yaw angle at which SWING ends and the swing leg is told to drop, for the
// segment at `segment_index`. The head uses params.yaw_threshold unchanged;
// each later segment's threshold is advanced by sync_lead (clamped so it
// stays inside the sweep), which shortens its natural cycle — see
// sync_release_gate above for why. The sweep itself still runs the full
// +/- yaw_amplitude; only the drop moment inside it moves.
double swing_drop_threshold(const ControlParams& params, int segment_index);

// Advances one segment's yaw FSM by one tick and emits leg events. Reads leg
// states from `seg` (pre-step values) and sensing from `snapshot`.
YawStepResult step_yaw_fsm(const SegmentController& seg, const SensorSnapshot& snapshot,
                           const ControlParams& params);

// Advances the whole chain one tick: SYNC gates are computed from the pre-step
// chain (simultaneous update), then each segment runs its yaw FSM followed by
// its two leg FSMs. snapshots[k].predecessor_in_stroke is overwritten here.
ControllerStep step_controller(const std::vector<SegmentController>& chain,
                               std::vector<SensorSnapshot> snapshots,
                               const ControlParams& params);

std::string to_string(const YawFsmState& yaw);

}  // namespace polyped
