#pragma once

#include <Eigen/Core>

#include "rigidflock/types.hpp"

namespace rigidflock {

/// Planar pose; theta is kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Unicycle input: forward speed along the heading and turn rate.
struct VelocityCommand {
  double v = 0.0;
  double omega = 0.0;
};

/// Maps theta into (-pi, pi].
double wrap_angle(double theta);

/// Kinematic input matrix [[cos, 0], [sin, 0], [0, 1]].
Eigen::Matrix<double, 3, 2> s_matrix(double theta);

/// One explicit Euler step of the unicycle kinematics. Throws InputError if
/// dt <= 0.
Pose step(const Pose& pose, const VelocityCommand& cmd, double dt);

/// Heading-error coupling matrix of the input transformation:
/// p_dot = B(theta_err) u when v = |u| cos(theta_err).
/// Identical to cos(theta_err) * rotation(theta_err).
Mat2 b_matrix(double theta_err);

}  // namespace rigidflock
