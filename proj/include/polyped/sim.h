#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polyped/actuation.h"
#include "polyped/control_params.h"
#include "polyped/robot_model.h"
#include "polyped/sim_config.h"
#include "polyped/terrain.h"
#include "polyped/trajectory.h"
#include "polyped/yaw_fsm.h"

namespace polyped {

struct SolverFailure : std::runtime_error {
  double residual;
  explicit SolverFailure(double res)
      : std::runtime_error("quasi-static solver failed to converge"), residual(res) {}
};

// One foot's contact bookkeeping. The anchor is where the tangential spring
// is tied to the ground; slip drags it until the Coulomb bound holds.
struct FootContact {
  bool active = false;
  Eigen::Vector2d anchor = Eigen::Vector2d::Zero();
  double normal_force = 0.0;
  bool load_bearing = false;
  bool slipped = false;
};

// Passive coordinates: head position (3), head orientation as z-y-x Euler
// angles (3), then one backbone pitch angle per inter-segment joint.
struct SimState {
  double t = 0.0;
  Eigen::VectorXd q;

  std::vector<ServoState> yaw_servos;  // index 0 is the head's virtual servo
  std::vector<ServoState> left_servos;
  std::vector<ServoState> right_servos;

  std::vector<double> yaw_angles;  // sampled at t
  std::vector<double> left_rolls;
  std::vector<double> right_rolls;

  std::vector<SegmentController> chain;
  std::vector<FootContact> contacts_left;
  std::vector<FootContact> contacts_right;

  bool trust_region_hit = false;  // body motion was capped this tick (falling)
  std::optional<Eigen::Vector3d> last_forward;  // body-frame continuity hint

  SegmentPose head_pose() const;
  std::vector<double> backbone_pitch() const;
};

struct ContactFlags {
  bool in_contact = false;
  bool load_bearing = false;
};

// Foot spring constant that lets the calibrated tripod stance sink 10% of the
// unloaded standing height (45-degree roll posture, one stance leg per segment).
double calibrate_leg_stiffness(const RobotModel& model, double g);

// Completes a config: fills foot_spring_k from the calibration when unset.
SimConfig resolve_sim_config(SimConfig config, const RobotModel& model);

// Chain poses for the current passive coordinates and sampled joint angles.
std::vector<SegmentPose> current_poses(const RobotModel& model, const SimState& state);

// Per-foot contact classification from the solved state. in_contact is
// geometric: the foot tip is at or below ground (or its spring is engaged);
// load_bearing additionally requires a normal force above 1% of one
// segment's weight share. The leg FSM consumes load_bearing.
std::vector<std::pair<ContactFlags, ContactFlags>> detect_contacts(
    const RobotModel& model, const SimState& state, const SimConfig& config,
    const Terrain& terrain);

// Resolves the passive coordinates to elastic-gravitational equilibrium with
// the current actuated angles held fixed: damped Gauss-Newton on the total
// energy, an active-set loop for unilateral contacts, and anchor dragging for
// Coulomb slip. Per-tick motion is capped by the trust region (a body with
// nothing to stand on sinks gracefully instead of diverging); exceeding
// max_iters without progress throws SolverFailure.
void solve_quasistatic(const RobotModel& model, SimState& state, const SimConfig& config,
                       const Terrain& terrain);

// Advances one tick: sample servos, solve statics, sense contacts, step the
// controller, hand new setpoints to the servos, and append one record.
void step_sim(const RobotModel& model, SimState& state, const ControlParams& params,
              const SimConfig& config, const Terrain& terrain, Trajectory& traj);

// Builds a randomized-phase initial state (seeded), settles it onto the
// terrain, and steps for `duration` seconds.
Trajectory run_trial(const RobotModel& model, const Terrain& terrain,
                     const ControlParams& params, const SimConfig& config,
                     std::uint64_t seed, double duration);

}  // namespace polyped
