#include "polyped/kinematics.h"

#include <cmath>
#include <stdexcept>

namespace polyped {

BodyFrame virtual_body_frame(const std::vector<Eigen::Vector3d>& segment_positions,
                             const std::vector<Eigen::Vector3d>& segment_z_axes,
                             const std::optional<Eigen::Vector3d>& prev_forward) {
  const size_t n = segment_positions.size();
  if (n < 2 || segment_z_axes.size() != n)
    throw std::invalid_argument("virtual_body_frame: need >= 2 segments with matching up vectors");

  BodyFrame frame;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : segment_positions) centroid += p;
  centroid /= static_cast<double>(n);
  frame.origin = centroid;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : segment_positions) {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  if (cov.norm() < 1e-12)
    throw std::invalid_argument("virtual_body_frame: segment positions are coincident");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Eigen::Vector3d forward = eig.eigenvectors().col(2);  // largest eigenvalue

  // Sign tie-break: point the axis headward; fall back to temporal
  // continuity when the chain is folded symmetric about the centroid.
  const Eigen::Vector3d head_to_tail = segment_positions.front() - segment_positions.back();
  double headward = forward.dot(head_to_tail);
  if (std::abs(headward) < 1e-9 && prev_forward)
    headward = forward.dot(*prev_forward);
  if (headward < 0.0) forward = -forward;

  Eigen::Vector3d mean_up = Eigen::Vector3d::Zero();
  for (const auto& z : segment_z_axes) mean_up += z;
  mean_up /= static_cast<double>(n);

  Eigen::Vector3d up = mean_up - mean_up.dot(forward) * forward;
  if (up.norm() < 1e-6)
    throw std::invalid_argument("virtual_body_frame: mean up vector parallel to body axis");
  up.normalize();

  frame.x_axis = forward;
  frame.z_axis = up;
  frame.y_axis = up.cross(forward);
  return frame;
}

PostureMetrics posture_metrics(const BodyFrame& frame, double ground_z) {
  PostureMetrics m;
  m.height = frame.origin.z() - ground_z;
  m.pitch = std::asin(std::clamp(frame.x_axis.z(), -1.0, 1.0));
  m.roll = std::atan2(frame.y_axis.z(), frame.z_axis.z());
  return m;
}

PostureMetrics posture_metrics(const BodyFrame& frame,
                               const std::vector<Eigen::Vector3d>& stance_feet) {
  double ground_z = 0.0;
  if (!stance_feet.empty()) {
    for (const auto& f : stance_feet) ground_z += f.z();
    ground_z /= static_cast<double>(stance_feet.size());
  }
  return posture_metrics(frame, ground_z);
}

}  // namespace polyped
