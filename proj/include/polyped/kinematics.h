#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace polyped {

// Centroid-anchored orthonormal frame for the articulated body: X along the
// chain's principal axis (pointing headward), Z the mean segment-up direction
// made orthogonal to X, Y completing the right-handed triad.
struct BodyFrame {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d x_axis = Eigen::Vector3d::UnitX();
  Eigen::Vector3d y_axis = Eigen::Vector3d::UnitY();
  Eigen::Vector3d z_axis = Eigen::Vector3d::UnitZ();
};

// Builds the frame from segment centers (head first) and their local up
// vectors. prev_forward, when given, breaks the principal-axis sign tie if
// the head-tail direction is nearly orthogonal to it (folded chain).
// Throws on degenerate input: coincident positions or mean-up parallel to
// the principal axis.
BodyFrame virtual_body_frame(const std::vector<Eigen::Vector3d>& segment_positions,
                             const std::vector<Eigen::Vector3d>& segment_z_axes,
                             const std::optional<Eigen::Vector3d>& prev_forward = {});

struct PostureMetrics {
  double height = 0.0;  // origin z above the local ground reference
  double pitch = 0.0;   // elevation of the forward axis, nose-up positive
  double roll = 0.0;    // rotation of the lateral axis about forward
};

// ground_z: terrain height underneath the frame origin (caller queries it).
PostureMetrics posture_metrics(const BodyFrame& frame, double ground_z);

// Convenience: ground reference taken as the mean z of the stance feet.
PostureMetrics posture_metrics(const BodyFrame& frame,
                               const std::vector<Eigen::Vector3d>& stance_feet);

}  // namespace polyped
