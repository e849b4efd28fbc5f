#include "rigidflock/unicycle.hpp"

#include <cmath>
#include <numbers>

namespace rigidflock {

double wrap_angle(double theta) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (theta > -kPi && theta <= kPi) return theta;
  double wrapped = std::fmod(theta + kPi, kTwoPi);
  if (wrapped <= 0.0) wrapped += kTwoPi;
  return wrapped - kPi;
}

Eigen::Matrix<double, 3, 2> s_matrix(double theta) {
  Eigen::Matrix<double, 3, 2> s;
  s << std::cos(theta), 0.0, std::sin(theta), 0.0, 0.0, 1.0;
  return s;
}

Pose step(const Pose& pose, const VelocityCommand& cmd, double dt) {
  if (!(dt > 0.0)) throw InputError("integration step must be positive");
  Pose next;
  next.x = pose.x + cmd.v * std::cos(pose.theta) * dt;
  next.y = pose.y + cmd.v * std::sin(pose.theta) * dt;
  next.theta = wrap_angle(pose.theta + cmd.omega * dt);
  return next;
}

Mat2 b_matrix(double theta_err) {
  const double c = std::cos(theta_err);
  const double half_s2 = 0.5 * std::sin(2.0 * theta_err);
  Mat2 b;
  b << c * c, -half_s2, half_s2, c * c;
  return b;
}

}  // namespace rigidflock
