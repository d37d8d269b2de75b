#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "polyped/leg_fsm.h"
#include "polyped/terrain.h"
#include "polyped/yaw_fsm.h"

namespace polyped {

// One segment's slice of a tick: joint angles, foot tips, FSM states, and
// per-foot contact/slip flags.
struct SegmentRecord {
  double yaw = 0.0;
  double roll_left = 0.0;
  double roll_right = 0.0;
  Eigen::Vector3d foot_left = Eigen::Vector3d::Zero();
  Eigen::Vector3d foot_right = Eigen::Vector3d::Zero();
  YawFsmState yaw_state;
  LegPhase leg_left = LegPhase::Stand;
  LegPhase leg_right = LegPhase::Stand;
  bool contact_left = false;
  bool contact_right = false;
  bool slip_left = false;
  bool slip_right = false;
};

struct BodyRecord {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();  // virtual body frame origin
  double height = 0.0;  // above local ground; world z in floating mode
  double pitch = 0.0;
  double roll = 0.0;
  // Frame axes, kept in memory for analysis; not part of the CSV schema.
  Eigen::Vector3d forward = Eigen::Vector3d::UnitX();
  Eigen::Vector3d lateral = Eigen::Vector3d::UnitY();
  Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
};

struct TrajectoryRecord {
  double t = 0.0;
  std::vector<SegmentRecord> segments;
  BodyRecord body;
};

struct Trajectory {
  double dt = 0.005;
  int n_segments = 0;
  TerrainKind terrain = TerrainKind::Flat;
  bool posture_valid = true;  // false for floating runs (no ground reference)
  std::vector<TrajectoryRecord> records;

  void save_csv(const std::string& path) const;
};

}  // namespace polyped
