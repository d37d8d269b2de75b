#pragma once

#include <stdexcept>

namespace polyped {

// Quasi-static world parameters. foot_spring_k <= 0 means "calibrate from the
// robot's weight" (10% static sink rule); it is skipped at zero gravity.
struct SimConfig {
  double dt = 0.005;
  double gravity = 9.81;
  double friction_mu = 0.6;
  double foot_spring_k = 0.0;        // N/m, calibrated when <= 0
  double foot_tangential_k = 1500.0; // N/m
  double backbone_pitch_stiffness = 25.0;  // N*m/rad
  double solver_tol = 1e-6;   // gradient-norm acceptance
  int max_iters = 120;
  // Per-tick passive motion caps. Translation and heading track the gait's
  // natural rates with room to spare; the tip cap (body roll/pitch and
  // backbone pitch) plays the role of inertia for falls: a statics solve
  // would otherwise tip the body over in one tick, faster than gravity could,
  // robbing a descending swing leg of the time it has to catch the fall.
  double trust_translation = 0.01;  // m per tick
  double trust_rotation = 0.1;      // rad per tick, heading (world yaw)
  double trust_tip = 0.008;         // rad per tick, roll/pitch axes

  void validate() const;
};

inline void SimConfig::validate() const {
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("SimConfig: ") + what);
  };
  if (dt <= 0.0) fail("dt must be > 0");
  if (gravity < 0.0) fail("gravity must be >= 0");
  if (friction_mu < 0.0) fail("friction_mu must be >= 0");
  if (foot_tangential_k <= 0.0 || backbone_pitch_stiffness <= 0.0)
    fail("stiffnesses must be > 0");
  if (solver_tol <= 0.0 || max_iters < 1) fail("solver settings must be positive");
  if (trust_translation <= 0.0 || trust_rotation <= 0.0 || trust_tip <= 0.0)
    fail("trust-region caps must be > 0");
}

}  // namespace polyped
