#pragma once

#include <Eigen/Dense>
#include <vector>

namespace polyped {

// Segmented chain: each segment carries one left and one right leg rolling
// about the segment's local x axis. Segment k >= 1 attaches to its
// predecessor through an actuated yaw joint (local z) and a passive pitch
// hinge (local y) at the shared interface. The head segment has no physical
// yaw joint; its controller drives a virtual servo that only paces the chain.
struct RobotModel {
  int n_segments = 3;
  double segment_length = 0.2;     // m
  double hip_lateral_offset = 0.03;  // hip pivot offset from the midline, m
  double leg_length = 0.12;        // m
  double segment_mass = 0.6;       // kg

  void validate() const;
};

// Rigid pose of one segment: rotation plus center position.
struct SegmentPose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d c = Eigen::Vector3d::Zero();

  Eigen::Vector3d x_axis() const { return R.col(0); }
  Eigen::Vector3d y_axis() const { return R.col(1); }
  Eigen::Vector3d z_axis() const { return R.col(2); }
};

// Chain forward kinematics. yaw[k] / pitch[k] are the joint angles between
// segments k-1 and k; index 0 is ignored (the head pose is given directly).
// The chain extends rearward along the head's -x direction.
std::vector<SegmentPose> chain_poses(const RobotModel& model, const SegmentPose& head,
                                     const std::vector<double>& yaw,
                                     const std::vector<double>& pitch);

struct FootPair {
  Eigen::Vector3d left;
  Eigen::Vector3d right;
};

// Foot tip in the segment frame. Roll is the swing angle, positive upward for
// both sides; roll = -pi/2 places the tip straight below the hip line.
Eigen::Vector3d foot_tip_local(const RobotModel& model, double roll, bool left_side);

// World foot-tip positions for every segment given its pose and leg rolls.
std::vector<FootPair> foot_positions(const RobotModel& model,
                                     const std::vector<SegmentPose>& poses,
                                     const std::vector<double>& phi_left,
                                     const std::vector<double>& phi_right);

}  // namespace polyped
