#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "polyped/kinematics.h"
#include "polyped/robot_model.h"
#include "support/oracles.h"

using namespace polyped;
using Eigen::Vector3d;

namespace {

std::vector<SegmentPose> straight_chain(const RobotModel& model) {
  const std::vector<double> zeros(model.n_segments, 0.0);
  return chain_poses(model, SegmentPose{}, zeros, zeros);
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  const double a = oracles::uniform(rng, -M_PI, M_PI);
  const double b = oracles::uniform(rng, -1.2, 1.2);
  const double c = oracles::uniform(rng, -M_PI, M_PI);
  return (Eigen::AngleAxisd(a, Vector3d::UnitZ()) *
          Eigen::AngleAxisd(b, Vector3d::UnitY()) *
          Eigen::AngleAxisd(c, Vector3d::UnitX()))
      .toRotationMatrix();
}

}  // namespace

TEST_CASE("straight chain lies along -x behind the head") {
  RobotModel model;
  const auto poses = straight_chain(model);
  REQUIRE(poses.size() == 3);
  CHECK(poses[0].c.isApprox(Vector3d(0, 0, 0), 1e-15));
  CHECK(poses[1].c.isApprox(Vector3d(-0.2, 0, 0), 1e-12));
  CHECK(poses[2].c.isApprox(Vector3d(-0.4, 0, 0), 1e-12));
  for (const auto& pose : poses) CHECK(pose.R.isApprox(Eigen::Matrix3d::Identity()));
}

TEST_CASE("yawed joint swings the follower in the plane") {
  RobotModel model;
  model.n_segments = 2;
  std::vector<double> yaw{0.0, M_PI / 2.0}, pitch{0.0, 0.0};
  const auto poses = chain_poses(model, SegmentPose{}, yaw, pitch);
  // Joint sits at (-0.1,0,0); the second segment extends along its own -x,
  // which after a +90 degree yaw points in -y.
  CHECK(poses[1].c.isApprox(Vector3d(-0.1, -0.1, 0), 1e-12));
  CHECK(poses[1].x_axis().isApprox(Vector3d(0, 1, 0), 1e-12));
}

TEST_CASE("foot tip placement against hand geometry") {
  RobotModel model;  // hip offset 0.03, leg 0.12

  SUBCASE("zero roll holds the tip level with the hip line") {
    const Vector3d left = foot_tip_local(model, 0.0, true);
    CHECK(left.isApprox(Vector3d(0.0, 0.15, 0.0), 1e-15));
    const Vector3d right = foot_tip_local(model, 0.0, false);
    CHECK(right.isApprox(Vector3d(0.0, -0.15, 0.0), 1e-15));
  }

  SUBCASE("quarter turn puts the tip straight below the hip") {
    const Vector3d tip = foot_tip_local(model, -M_PI / 2.0, true);
    CHECK(tip.x() == 0.0);
    CHECK(tip.y() == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(tip.z() == doctest::Approx(-0.12).epsilon(1e-12));
  }

  SUBCASE("45-degree stance drops the tip by l*sin(45)") {
    const Vector3d tip = foot_tip_local(model, -0.7854, true);
    CHECK(tip.z() == doctest::Approx(-0.12 * std::sin(0.7854)).epsilon(1e-9));
    CHECK(-tip.z() == doctest::Approx(0.7071 * 0.12).epsilon(1e-4));
  }
}

TEST_CASE("body frame of an axis-aligned chain") {
  // Head first: centers descending along +x, head at (0.4, 0, 0).
  const std::vector<Vector3d> centers{{0.4, 0, 0}, {0.2, 0, 0}, {0.0, 0, 0}};
  const std::vector<Vector3d> ups(3, Vector3d::UnitZ());
  const BodyFrame f = virtual_body_frame(centers, ups);
  CHECK(f.origin.isApprox(Vector3d(0.2, 0, 0), 1e-12));
  CHECK(f.x_axis.isApprox(Vector3d::UnitX(), 1e-12));
  CHECK(f.z_axis.isApprox(Vector3d::UnitZ(), 1e-12));
  CHECK(f.y_axis.isApprox(Vector3d::UnitY(), 1e-12));
}

TEST_CASE("projection removes the forward component of the mean up vector") {
  const std::vector<Vector3d> centers{{0.4, 0, 0}, {0.2, 0, 0}, {0.0, 0, 0}};
  const double tilt = 10.0 * M_PI / 180.0;
  const std::vector<Vector3d> ups(3, Vector3d(std::sin(tilt), 0.0, std::cos(tilt)));
  const BodyFrame f = virtual_body_frame(centers, ups);
  CHECK(f.z_axis.isApprox(Vector3d::UnitZ(), 1e-12));
  const PostureMetrics m = posture_metrics(f, 0.0);
  CHECK(m.roll == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two segments orient the axis along their difference") {
  const std::vector<Vector3d> centers{{1.0, 2.0, 0.5}, {0.0, 1.0, 0.0}};
  const std::vector<Vector3d> ups(2, Vector3d::UnitZ());
  const BodyFrame f = virtual_body_frame(centers, ups);
  const Vector3d expect = (centers[0] - centers[1]).normalized();
  CHECK(f.x_axis.isApprox(expect, 1e-9));
}

TEST_CASE("posture metrics") {
  SUBCASE("level frame") {
    const PostureMetrics m = posture_metrics(BodyFrame{}, 0.0);
    CHECK(m.pitch == 0.0);
    CHECK(m.roll == 0.0);
  }
  SUBCASE("five-degree climb") {
    BodyFrame f;
    const double a = 5.0 * M_PI / 180.0;
    f.x_axis = Vector3d(std::cos(a), 0, std::sin(a));
    f.z_axis = Vector3d(-std::sin(a), 0, std::cos(a));
    f.y_axis = f.z_axis.cross(f.x_axis);
    const PostureMetrics m = posture_metrics(f, 0.0);
    CHECK(m.pitch == doctest::Approx(0.0872664625997).epsilon(1e-9));
    CHECK(m.roll == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("height against the stance feet") {
    BodyFrame f;
    f.origin = Vector3d(0, 0, 0.09);
    const std::vector<Vector3d> feet{{0.1, 0.1, -0.01}, {0.1, -0.1, 0.01},
                                     {-0.1, 0.0, 0.0}};
    const PostureMetrics m = posture_metrics(f, feet);
    CHECK(m.height == doctest::Approx(0.09).epsilon(1e-12));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  const std::vector<Vector3d> same(3, Vector3d(1, 2, 3));
  const std::vector<Vector3d> ups(3, Vector3d::UnitZ());
  CHECK_THROWS(virtual_body_frame(same, ups));

  const std::vector<Vector3d> line{{0.4, 0, 0}, {0.2, 0, 0}, {0.0, 0, 0}};
  const std::vector<Vector3d> bad_ups(3, Vector3d::UnitX());  // parallel to the axis
  CHECK_THROWS(virtual_body_frame(line, bad_ups));
}

TEST_CASE("frame properties over random chains") {
  std::mt19937_64 rng(77001);
  RobotModel model;
  for (int trial = 0; trial < 1000; ++trial) {
    model.n_segments = 2 + static_cast<int>(rng() % 7);
    SegmentPose head;
    head.R = random_rotation(rng);
    head.c = Vector3d(oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2),
                      oracles::uniform(rng, -2, 2));
    std::vector<double> yaw(model.n_segments, 0.0), pitch(model.n_segments, 0.0);
    for (int k = 1; k < model.n_segments; ++k) {
      yaw[k] = oracles::uniform(rng, -0.5, 0.5);
      pitch[k] = oracles::uniform(rng, -0.3, 0.3);
    }
    const auto poses = chain_poses(model, head, yaw, pitch);
    std::vector<Vector3d> centers, ups;
    for (const auto& pose : poses) {
      centers.push_back(pose.c);
      ups.push_back(pose.z_axis());
    }

    const BodyFrame f = virtual_body_frame(centers, ups);

    // Orthonormal, right-handed, and sign-fixed toward the head.
    CHECK(std::abs(f.x_axis.norm() - 1.0) < 1e-9);
    CHECK(std::abs(f.y_axis.norm() - 1.0) < 1e-9);
    CHECK(std::abs(f.z_axis.norm() - 1.0) < 1e-9);
    CHECK(std::abs(f.x_axis.dot(f.y_axis)) < 1e-9);
    CHECK(std::abs(f.x_axis.dot(f.z_axis)) < 1e-9);
    CHECK(std::abs(f.y_axis.dot(f.z_axis)) < 1e-9);
    CHECK((f.x_axis.cross(f.y_axis) - f.z_axis).norm() < 1e-9);
    CHECK(f.x_axis.dot(centers.front() - centers.back()) >= -1e-12);

    // Rigid-motion equivariance.
    const Eigen::Matrix3d Rw = random_rotation(rng);
    const Vector3d tw(oracles::uniform(rng, -3, 3), oracles::uniform(rng, -3, 3),
                      oracles::uniform(rng, -3, 3));
    std::vector<Vector3d> centers2, ups2;
    for (size_t i = 0; i < centers.size(); ++i) {
      centers2.push_back(Rw * centers[i] + tw);
      ups2.push_back(Rw * ups[i]);
    }
    const BodyFrame g = virtual_body_frame(centers2, ups2);
    CHECK((g.origin - (Rw * f.origin + tw)).norm() < 1e-9);
    CHECK((g.x_axis - Rw * f.x_axis).norm() < 1e-9);
    CHECK((g.y_axis - Rw * f.y_axis).norm() < 1e-9);
    CHECK((g.z_axis - Rw * f.z_axis).norm() < 1e-9);
  }
}
