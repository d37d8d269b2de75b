#include "polyped/robot_model.h"

#include <stdexcept>

namespace polyped {

void RobotModel::validate() const {
  if (n_segments < 1) throw std::invalid_argument("RobotModel: n_segments must be >= 1");
  if (segment_length <= 0.0 || hip_lateral_offset <= 0.0 || leg_length <= 0.0 ||
      segment_mass <= 0.0)
    throw std::invalid_argument("RobotModel: lengths and mass must be > 0");
}

std::vector<SegmentPose> chain_poses(const RobotModel& model, const SegmentPose& head,
                                     const std::vector<double>& yaw,
                                     const std::vector<double>& pitch) {
  const size_t n = static_cast<size_t>(model.n_segments);
  if (yaw.size() != n || pitch.size() != n)
    throw std::invalid_argument("chain_poses: joint vectors must have one entry per segment");

  std::vector<SegmentPose> poses(n);
  poses[0] = head;
  const double half = 0.5 * model.segment_length;
  for (size_t k = 1; k < n; ++k) {
    const SegmentPose& prev = poses[k - 1];
    Eigen::Matrix3d joint_rot =
        (Eigen::AngleAxisd(yaw[k], Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(pitch[k], Eigen::Vector3d::UnitY()))
            .toRotationMatrix();
    poses[k].R = prev.R * joint_rot;
    const Eigen::Vector3d joint_point = prev.c - half * prev.x_axis();
    poses[k].c = joint_point - half * poses[k].x_axis();
  }
  return poses;
}

Eigen::Vector3d foot_tip_local(const RobotModel& model, double roll, bool left_side) {
  const double lateral = model.hip_lateral_offset + model.leg_length * std::cos(roll);
  const double side = left_side ? 1.0 : -1.0;
  return {0.0, side * lateral, model.leg_length * std::sin(roll)};
}

std::vector<FootPair> foot_positions(const RobotModel& model,
                                     const std::vector<SegmentPose>& poses,
                                     const std::vector<double>& phi_left,
                                     const std::vector<double>& phi_right) {
  const size_t n = poses.size();
  if (phi_left.size() != n || phi_right.size() != n)
    throw std::invalid_argument("foot_positions: roll vectors must match pose count");

  std::vector<FootPair> feet(n);
  for (size_t k = 0; k < n; ++k) {
    feet[k].left = poses[k].c + poses[k].R * foot_tip_local(model, phi_left[k], true);
    feet[k].right = poses[k].c + poses[k].R * foot_tip_local(model, phi_right[k], false);
  }
  return feet;
}

}  // namespace polyped
