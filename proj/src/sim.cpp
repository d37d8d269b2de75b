#include "polyped/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "polyped/gait_cycle.h"
#include "polyped/kinematics.h"
#include "polyped/log.h"

namespace polyped {

namespace {

// Forward kinematics plus the rotation axes/pivots needed for point Jacobians.
struct FkCache {
  std::vector<SegmentPose> poses;
  std::vector<FootPair> feet;
  Eigen::Vector3d head_pos;
  Eigen::Vector3d axis_yaw, axis_pitch, axis_roll;  // head Euler axes
  std::vector<Eigen::Vector3d> hinge_axis;          // backbone pitch, index >= 1
  std::vector<Eigen::Vector3d> hinge_pivot;
};

Eigen::Matrix3d head_rotation(const Eigen::VectorXd& q) {
  return (Eigen::AngleAxisd(q[3], Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(q[4], Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(q[5], Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

FkCache compute_fk(const RobotModel& model, const Eigen::VectorXd& q,
                   const std::vector<double>& yaw, const std::vector<double>& left,
                   const std::vector<double>& right) {
  const int n = model.n_segments;
  FkCache fk;
  SegmentPose head;
  head.c = q.head<3>();
  head.R = head_rotation(q);

  std::vector<double> pitch(n, 0.0);
  for (int j = 1; j < n; ++j) pitch[j] = q[5 + j];
  fk.poses = chain_poses(model, head, yaw, pitch);
  fk.feet = foot_positions(model, fk.poses, left, right);

  fk.head_pos = head.c;
  fk.axis_yaw = Eigen::Vector3d::UnitZ();
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(q[3], Eigen::Vector3d::UnitZ()).toRotationMatrix();
  fk.axis_pitch = rz * Eigen::Vector3d::UnitY();
  fk.axis_roll =
      rz * (Eigen::AngleAxisd(q[4], Eigen::Vector3d::UnitY()) * Eigen::Vector3d::UnitX());

  fk.hinge_axis.assign(n, Eigen::Vector3d::Zero());
  fk.hinge_pivot.assign(n, Eigen::Vector3d::Zero());
  const double half = 0.5 * model.segment_length;
  for (int j = 1; j < n; ++j) {
    const SegmentPose& prev = fk.poses[j - 1];
    fk.hinge_pivot[j] = prev.c - half * prev.x_axis();
    fk.hinge_axis[j] =
        prev.R * (Eigen::AngleAxisd(yaw[j], Eigen::Vector3d::UnitZ()) *
                  Eigen::Vector3d::UnitY());
  }
  return fk;
}

// d(point)/dq for a point rigidly attached to segment `seg`.
void point_jacobian(const FkCache& fk, int seg, const Eigen::Vector3d& p,
                    Eigen::Matrix3Xd& jac) {
  jac.setZero();
  jac.leftCols<3>().setIdentity();
  jac.col(3) = fk.axis_yaw.cross(p - fk.head_pos);
  jac.col(4) = fk.axis_pitch.cross(p - fk.head_pos);
  jac.col(5) = fk.axis_roll.cross(p - fk.head_pos);
  for (int j = 1; j <= seg; ++j)
    jac.col(5 + j) = fk.hinge_axis[j].cross(p - fk.hinge_pivot[j]);
}

// One engaged foot during a solve: ground sampled at the anchor, which stays
// fixed while the body is resolved (the tangential spring keeps the foot
// nearby, so the sample is accurate to the slip distance).
struct ActiveContact {
  int seg = 0;
  bool left = false;
  Eigen::Vector2d anchor = Eigen::Vector2d::Zero();
  double ground_z = 0.0;
  double penetration = 0.0;   // outputs of the last evaluation
  double tangential = 0.0;
};

struct Evaluation {
  double energy = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

const Eigen::Vector3d& foot_of(const FkCache& fk, const ActiveContact& c) {
  return c.left ? fk.feet[c.seg].left : fk.feet[c.seg].right;
}

double contact_energy(const SimConfig& config, const ActiveContact& c,
                      const Eigen::Vector3d& foot) {
  const double pen = c.ground_z - foot.z();
  double e = 0.0;
  if (pen > 0.0) e += 0.5 * config.foot_spring_k * pen * pen;
  const Eigen::Vector2d d = foot.head<2>() - c.anchor;
  e += 0.5 * config.foot_tangential_k * d.squaredNorm();
  return e;
}

double total_energy(const RobotModel& model, const SimConfig& config,
                    const std::vector<ActiveContact>& contacts, const FkCache& fk,
                    const Eigen::VectorXd& q) {
  double e = 0.0;
  const int n = model.n_segments;
  for (int k = 0; k < n; ++k)
    e += model.segment_mass * config.gravity * fk.poses[k].c.z();
  for (int j = 1; j < n; ++j)
    e += 0.5 * config.backbone_pitch_stiffness * q[5 + j] * q[5 + j];
  for (const auto& c : contacts) e += contact_energy(config, c, foot_of(fk, c));
  return e;
}

Evaluation evaluate(const RobotModel& model, const SimConfig& config,
                    std::vector<ActiveContact>& contacts, const FkCache& fk,
                    const Eigen::VectorXd& q) {
  const int n = model.n_segments;
  const int nq = static_cast<int>(q.size());
  Evaluation ev;
  ev.grad = Eigen::VectorXd::Zero(nq);
  ev.hess = Eigen::MatrixXd::Zero(nq, nq);
  Eigen::Matrix3Xd jac(3, nq);

  for (int k = 0; k < n; ++k) {
    ev.energy += model.segment_mass * config.gravity * fk.poses[k].c.z();
    point_jacobian(fk, k, fk.poses[k].c, jac);
    ev.grad += model.segment_mass * config.gravity * jac.row(2).transpose();
  }

  for (int j = 1; j < n; ++j) {
    const double theta = q[5 + j];
    ev.energy += 0.5 * config.backbone_pitch_stiffness * theta * theta;
    ev.grad[5 + j] += config.backbone_pitch_stiffness * theta;
    ev.hess(5 + j, 5 + j) += config.backbone_pitch_stiffness;
  }

  for (auto& c : contacts) {
    const Eigen::Vector3d& foot = foot_of(fk, c);
    point_jacobian(fk, c.seg, foot, jac);

    const double pen = c.ground_z - foot.z();
    c.penetration = pen;
    if (pen > 0.0) {
      ev.energy += 0.5 * config.foot_spring_k * pen * pen;
      ev.grad -= config.foot_spring_k * pen * jac.row(2).transpose();
      ev.hess += config.foot_spring_k * jac.row(2).transpose() * jac.row(2);
    }

    const Eigen::Vector2d d = foot.head<2>() - c.anchor;
    c.tangential = config.foot_tangential_k * d.norm();
    ev.energy += 0.5 * config.foot_tangential_k * d.squaredNorm();
    ev.grad += config.foot_tangential_k *
               (jac.row(0).transpose() * d.x() + jac.row(1).transpose() * d.y());
    ev.hess += config.foot_tangential_k *
               (jac.row(0).transpose() * jac.row(0) + jac.row(1).transpose() * jac.row(1));
  }
  return ev;
}

// Per-tick passive-motion budget; exhausting it means the body is falling or
// tipping faster than statics can track, so the tick is truncated gracefully.
// Heading (world yaw) is budgeted separately from the tip axes (body
// roll/pitch and backbone pitches): strokes legitimately swing the heading
// quickly, while tip-axis motion at speed is a fall and must stay
// gravity-paced so a touching-down foot can interrupt it.
struct MotionBudget {
  double translation;
  double rotation;  // heading
  double tip;
  bool exhausted = false;

  static double tip_norm(const Eigen::VectorXd& delta) {
    return delta.tail(delta.size() - 4).cwiseAbs().maxCoeff();
  }

  // Scales `delta` to respect both the per-iteration cap and what is left of
  // the budget, then charges the budget.
  void apply(Eigen::VectorXd& delta, double iter_translation, double iter_rotation) {
    const double dp = delta.head<3>().norm();
    const double dyaw = std::abs(delta[3]);
    const double dtip = tip_norm(delta);
    double scale = 1.0;
    if (dp > iter_translation) scale = std::min(scale, iter_translation / dp);
    if (dyaw > iter_rotation) scale = std::min(scale, iter_rotation / dyaw);
    if (dtip > iter_rotation) scale = std::min(scale, iter_rotation / dtip);
    if (dp * scale > translation) scale = std::min(scale, translation / dp);
    if (dyaw * scale > rotation) scale = std::min(scale, rotation / dyaw);
    if (dtip * scale > tip) scale = std::min(scale, tip / dtip);
    delta *= scale;
    charge(delta, -1.0);
  }

  void charge(const Eigen::VectorXd& delta, double sign) {
    translation += sign * delta.head<3>().norm();
    rotation += sign * std::abs(delta[3]);
    tip += sign * tip_norm(delta);
    exhausted = translation <= 1e-12 || rotation <= 1e-12 || tip <= 1e-12;
  }
};

// Damped Gauss-Newton descent on the contact/gravity/spring energy with the
// active set held fixed. Returns false when the motion budget ran out.
bool minimize_energy(const RobotModel& model, const SimConfig& config,
                     std::vector<ActiveContact>& contacts, SimState& state,
                     MotionBudget& budget) {
  double lambda = 1e-4;
  FkCache fk = compute_fk(model, state.q, state.yaw_angles, state.left_rolls,
                          state.right_rolls);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    Evaluation ev = evaluate(model, config, contacts, fk, state.q);
    if (ev.grad.norm() <= config.solver_tol) return true;

    // Marquardt damping with a floor so coordinates without curvature
    // (free-fall directions) still take bounded descent steps.
    Eigen::VectorXd damping = ev.hess.diagonal().cwiseMax(1.0);
    bool stepped = false;
    while (lambda <= 1e12) {
      Eigen::MatrixXd h = ev.hess;
      h.diagonal() += lambda * damping;
      Eigen::VectorXd delta = h.ldlt().solve(-ev.grad);
      budget.apply(delta, 0.02, 0.05);

      const Eigen::VectorXd q_try = state.q + delta;
      FkCache fk_try = compute_fk(model, q_try, state.yaw_angles, state.left_rolls,
                                  state.right_rolls);
      const double e_try = total_energy(model, config, contacts, fk_try, q_try);
      if (e_try < ev.energy || delta.norm() <= 1e-15) {
        state.q = q_try;
        fk = std::move(fk_try);
        lambda = std::max(lambda / 3.0, 1e-10);
        stepped = true;
        break;
      }
      // Undo the budget charge for the rejected step.
      budget.charge(delta, 1.0);
      lambda *= 10.0;
    }
    if (budget.exhausted) {
      state.trust_region_hit = true;
      return false;
    }
    if (!stepped) {
      if (ev.grad.norm() <= 1e-3) return true;  // flat kink; close enough
      throw SolverFailure(ev.grad.norm());
    }
  }

  FkCache fk_final = compute_fk(model, state.q, state.yaw_angles, state.left_rolls,
                                state.right_rolls);
  Evaluation ev = evaluate(model, config, contacts, fk_final, state.q);
  if (ev.grad.norm() <= 1e-2) {
    log_debug("solver hit max_iters with small residual; accepting");
    return true;
  }
  throw SolverFailure(ev.grad.norm());
}

FootContact* contact_slot(SimState& state, int seg, bool left) {
  return left ? &state.contacts_left[seg] : &state.contacts_right[seg];
}

}  // namespace

SegmentPose SimState::head_pose() const {
  SegmentPose pose;
  pose.c = q.head<3>();
  pose.R = head_rotation(q);
  return pose;
}

std::vector<double> SimState::backbone_pitch() const {
  std::vector<double> pitch(yaw_angles.size(), 0.0);
  for (size_t j = 1; j < pitch.size(); ++j) pitch[j] = q[5 + j];
  return pitch;
}

double calibrate_leg_stiffness(const RobotModel& model, double g) {
  if (model.segment_mass <= 0.0)
    throw std::invalid_argument("calibrate_leg_stiffness: zero mass");
  const double share = model.segment_mass * g;  // one stance leg per segment
  const double unloaded_height = model.leg_length * std::sin(M_PI / 4.0);
  return share / (0.10 * unloaded_height);
}

SimConfig resolve_sim_config(SimConfig config, const RobotModel& model) {
  config.validate();
  if (config.foot_spring_k <= 0.0) {
    config.foot_spring_k = config.gravity > 0.0
                               ? calibrate_leg_stiffness(model, config.gravity)
                               : 700.0;  // floating: calibration skipped
  }
  return config;
}

std::vector<SegmentPose> current_poses(const RobotModel& model, const SimState& state) {
  return chain_poses(model, state.head_pose(), state.yaw_angles,
                     state.backbone_pitch());
}

std::vector<std::pair<ContactFlags, ContactFlags>> detect_contacts(
    const RobotModel& model, const SimState& state, const SimConfig& config,
    const Terrain& terrain) {
  const int n = model.n_segments;
  std::vector<std::pair<ContactFlags, ContactFlags>> flags(n);
  const auto poses = current_poses(model, state);
  const auto feet = foot_positions(model, poses, state.left_rolls, state.right_rolls);
  const double load_floor = 0.01 * model.segment_mass * config.gravity;

  for (int k = 0; k < n; ++k) {
    auto classify = [&](const Eigen::Vector3d& foot, const FootContact& slot) {
      ContactFlags f;
      const auto ground = terrain.height_at(foot.x(), foot.y());
      if (ground) f.in_contact = slot.active || foot.z() <= *ground + 1e-9;
      f.load_bearing = slot.active && slot.normal_force > load_floor;
      return f;
    };
    flags[k].first = classify(feet[k].left, state.contacts_left[k]);
    flags[k].second = classify(feet[k].right, state.contacts_right[k]);
  }
  return flags;
}

void solve_quasistatic(const RobotModel& model, SimState& state, const SimConfig& config,
                       const Terrain& terrain) {
  state.trust_region_hit = false;
  const int n = model.n_segments;
  for (int k = 0; k < n; ++k) {
    state.contacts_left[k].slipped = false;
    state.contacts_right[k].slipped = false;
  }

  if (terrain.spec().kind == TerrainKind::Floating) {
    // No ground and (normally) no gravity: only the backbone springs act.
    std::vector<ActiveContact> none;
    MotionBudget budget{config.trust_translation, config.trust_rotation, config.trust_tip};
    minimize_energy(model, config, none, state, budget);
    return;
  }

  MotionBudget budget{config.trust_translation, config.trust_rotation, config.trust_tip};
  for (int pass = 0; pass < 12; ++pass) {
    // Active-set update from the current configuration.
    bool set_changed = false;
    const auto poses = current_poses(model, state);
    const auto feet = foot_positions(model, poses, state.left_rolls, state.right_rolls);
    for (int k = 0; k < n; ++k) {
      for (bool left : {true, false}) {
        const Eigen::Vector3d& foot = left ? feet[k].left : feet[k].right;
        FootContact* slot = contact_slot(state, k, left);
        const auto ground = terrain.height_at(foot.x(), foot.y());
        if (!ground) continue;
        if (!slot->active && foot.z() < *ground) {
          slot->active = true;
          slot->anchor = foot.head<2>();
          set_changed = true;
        } else if (slot->active) {
          const auto anchor_ground = terrain.height_at(slot->anchor.x(), slot->anchor.y());
          if (anchor_ground && foot.z() >= *anchor_ground) {
            slot->active = false;
            slot->normal_force = 0.0;
            set_changed = true;
          }
        }
      }
    }

    // Gather the engaged feet.
    std::vector<ActiveContact> contacts;
    for (int k = 0; k < n; ++k) {
      for (bool left : {true, false}) {
        FootContact* slot = contact_slot(state, k, left);
        if (!slot->active) continue;
        ActiveContact c;
        c.seg = k;
        c.left = left;
        c.anchor = slot->anchor;
        c.ground_z = *terrain.height_at(c.anchor.x(), c.anchor.y());
        contacts.push_back(c);
      }
    }

    const bool finished = minimize_energy(model, config, contacts, state, budget);

    // Coulomb pass: drag anchors whose tangential force exceeds mu * normal.
    bool slipped_any = false;
    {
      const auto poses2 = current_poses(model, state);
      const auto feet2 =
          foot_positions(model, poses2, state.left_rolls, state.right_rolls);
      for (auto& c : contacts) {
        FootContact* slot = contact_slot(state, c.seg, c.left);
        const Eigen::Vector3d& foot = c.left ? feet2[c.seg].left : feet2[c.seg].right;
        const double pen = c.ground_z - foot.z();
        const double normal = config.foot_spring_k * std::max(0.0, pen);
        slot->normal_force = normal;
        const Eigen::Vector2d d = foot.head<2>() - c.anchor;
        const double tangential = config.foot_tangential_k * d.norm();
        const double bound = config.friction_mu * normal;
        if (tangential > bound + 1e-3) {
          if (normal <= 0.0) {
            slot->active = false;
          } else {
            slot->anchor = foot.head<2>() - d.normalized() * (bound / config.foot_tangential_k);
          }
          slot->slipped = true;
          slipped_any = true;
        }
      }
    }

    if (!finished) return;  // budget exhausted: falling, handled next tick
    if (!set_changed && !slipped_any && pass > 0) return;
    if (pass == 0 && !set_changed && !slipped_any) return;
  }
  log_debug("contact active-set loop hit its pass limit; accepting current state");
}

namespace {

TrajectoryRecord make_record(const RobotModel& model, SimState& state,
                             const SimConfig& config, const Terrain& terrain,
                             std::optional<Eigen::Vector3d>& last_forward) {
  const int n = model.n_segments;
  TrajectoryRecord rec;
  rec.t = state.t;
  rec.segments.resize(n);

  const auto poses = current_poses(model, state);
  const auto feet = foot_positions(model, poses, state.left_rolls, state.right_rolls);

  for (int k = 0; k < n; ++k) {
    SegmentRecord& s = rec.segments[k];
    s.yaw = state.yaw_angles[k];
    s.roll_left = state.left_rolls[k];
    s.roll_right = state.right_rolls[k];
    s.foot_left = feet[k].left;
    s.foot_right = feet[k].right;
    s.yaw_state = state.chain[k].yaw;
    s.leg_left = state.chain[k].left_leg.phase;
    s.leg_right = state.chain[k].right_leg.phase;
    const double load_floor = 0.01 * model.segment_mass * config.gravity;
    s.contact_left = state.contacts_left[k].active &&
                     state.contacts_left[k].normal_force > load_floor;
    s.contact_right = state.contacts_right[k].active &&
                      state.contacts_right[k].normal_force > load_floor;
    s.slip_left = state.contacts_left[k].slipped;
    s.slip_right = state.contacts_right[k].slipped;
  }

  BodyFrame frame;
  if (n >= 2) {
    std::vector<Eigen::Vector3d> centers(n), ups(n);
    for (int k = 0; k < n; ++k) {
      centers[k] = poses[k].c;
      ups[k] = poses[k].z_axis();
    }
    frame = virtual_body_frame(centers, ups, last_forward);
  } else {
    frame.origin = poses[0].c;
    frame.x_axis = poses[0].x_axis();
    frame.y_axis = poses[0].y_axis();
    frame.z_axis = poses[0].z_axis();
  }
  last_forward = frame.x_axis;

  const auto ground = terrain.height_at(frame.origin.x(), frame.origin.y());
  const PostureMetrics pm = posture_metrics(frame, ground ? *ground : 0.0);
  rec.body.origin = frame.origin;
  rec.body.height = pm.height;
  rec.body.pitch = pm.pitch;
  rec.body.roll = pm.roll;
  rec.body.forward = frame.x_axis;
  rec.body.lateral = frame.y_axis;
  rec.body.up = frame.z_axis;
  return rec;
}

}  // namespace

void step_sim(const RobotModel& model, SimState& state, const ControlParams& params,
              const SimConfig& config, const Terrain& terrain, Trajectory& traj) {
  if (config.dt <= 0.0) throw std::invalid_argument("step_sim: dt must be > 0");
  const int n = model.n_segments;
  const double t_new = state.t + config.dt;

  for (int k = 0; k < n; ++k) {
    state.yaw_angles[k] = step_servo(state.yaw_servos[k], std::nullopt, t_new).pos;
    state.left_rolls[k] = step_servo(state.left_servos[k], std::nullopt, t_new).pos;
    state.right_rolls[k] = step_servo(state.right_servos[k], std::nullopt, t_new).pos;
  }

  solve_quasistatic(model, state, config, terrain);
  const auto contact_flags = detect_contacts(model, state, config, terrain);

  std::vector<SensorSnapshot> snapshots(n);
  for (int k = 0; k < n; ++k) {
    snapshots[k].psi = state.yaw_angles[k];
    snapshots[k].phi_left = state.left_rolls[k];
    snapshots[k].phi_right = state.right_rolls[k];
    snapshots[k].contact_left = contact_flags[k].first.load_bearing;
    snapshots[k].contact_right = contact_flags[k].second.load_bearing;
    snapshots[k].t = t_new;
  }

  ControllerStep ctrl = step_controller(state.chain, snapshots, params);
  state.chain = std::move(ctrl.chain);
  for (int k = 0; k < n; ++k) {
    step_servo(state.yaw_servos[k], ctrl.setpoints[k].yaw, t_new);
    step_servo(state.left_servos[k], ctrl.setpoints[k].left, t_new);
    step_servo(state.right_servos[k], ctrl.setpoints[k].right, t_new);
  }

  state.t = t_new;
  traj.records.push_back(make_record(model, state, config, terrain, state.last_forward));
}

Trajectory run_trial(const RobotModel& model, const Terrain& terrain,
                     const ControlParams& params, const SimConfig& raw_config,
                     std::uint64_t seed, double duration) {
  model.validate();
  params.validate();
  if (duration < 0.0) throw std::invalid_argument("run_trial: duration must be >= 0");
  const SimConfig config = resolve_sim_config(raw_config, model);

  const int n = model.n_segments;
  const MotorLimits yaw_motor{params.yaw_speed_max, params.profile_accel, 7.3,
                              -M_PI / 2.0, M_PI / 2.0};
  const MotorLimits leg_motor{params.leg_speed_max, params.profile_accel, 7.3,
                              -M_PI / 2.0, M_PI / 2.0};

  SimState state;
  state.q = Eigen::VectorXd::Zero(6 + n - 1);
  state.yaw_angles.assign(n, 0.0);
  state.left_rolls.assign(n, 0.0);
  state.right_rolls.assign(n, 0.0);
  state.contacts_left.assign(n, {});
  state.contacts_right.assign(n, {});

  std::mt19937_64 rng(seed);
  for (int k = 0; k < n; ++k) {
    SegmentInit init = randomize_segment_phase(rng, k, params, yaw_motor, leg_motor);
    state.chain.push_back(init.controller);
    ServoState yaw_servo(yaw_motor);
    yaw_servo.profile = init.yaw_profile;
    ServoState left_servo(leg_motor);
    left_servo.profile = init.left_profile;
    ServoState right_servo(leg_motor);
    right_servo.profile = init.right_profile;
    state.yaw_servos.push_back(yaw_servo);
    state.left_servos.push_back(left_servo);
    state.right_servos.push_back(right_servo);
  }
  for (int k = 0; k < n; ++k) {
    state.yaw_angles[k] = sample_profile(state.yaw_servos[k].profile, 0.0).pos;
    state.left_rolls[k] = sample_profile(state.left_servos[k].profile, 0.0).pos;
    state.right_rolls[k] = sample_profile(state.right_servos[k].profile, 0.0).pos;
  }

  // Drop the body so the lowest foot just touches the ground, then settle.
  if (terrain.spec().kind != TerrainKind::Floating) {
    const auto poses = current_poses(model, state);
    const auto feet = foot_positions(model, poses, state.left_rolls, state.right_rolls);
    double shift = -1e9;
    for (const auto& pair : feet) {
      for (const Eigen::Vector3d* f : {&pair.left, &pair.right}) {
        const auto ground = terrain.height_at(f->x(), f->y());
        if (ground) shift = std::max(shift, *ground - f->z());
      }
    }
    if (shift > -1e9) state.q[2] += shift;
    solve_quasistatic(model, state, config, terrain);
    solve_quasistatic(model, state, config, terrain);
  }

  Trajectory traj;
  traj.dt = config.dt;
  traj.n_segments = n;
  traj.terrain = terrain.spec().kind;
  traj.posture_valid = terrain.spec().kind != TerrainKind::Floating;
  traj.records.push_back(make_record(model, state, config, terrain, state.last_forward));

  const long n_steps = std::lround(duration / config.dt);
  for (long i = 0; i < n_steps; ++i)
    step_sim(model, state, params, config, terrain, traj);
  return traj;
}

}  // namespace polyped
