#include "rigidflock/flocking.hpp"

#include <cmath>

#include "rigidflock/observers.hpp"

namespace rigidflock {

Vec2 shape_gradient(std::span<const NeighborGeometry> neighbors) {
  Vec2 sum = Vec2::Zero();
  for (const auto& nb : neighbors) sum += nb.rel_position * nb.z;
  return sum;
}

Vec2 control_u(std::span<const NeighborGeometry> neighbors, const Vec2& v_f_hat, double k_a) {
  return -k_a * shape_gradient(neighbors) + v_f_hat;
}

double desired_heading(const Vec2& u) {
  if (u.norm() <= kZeroControlThreshold) return 0.0;
  return std::atan2(u.y(), u.x());
}

Vec2 shape_term_rate(std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
                     std::span<const Vec2> neighbor_velocities, double k_a) {
  if (neighbors.size() != neighbor_velocities.size()) {
    throw InputError("neighbor geometry and velocity lists differ in length");
  }
  Vec2 sum = Vec2::Zero();
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    const Vec2& p = neighbors[k].rel_position;
    const Mat2 weight = neighbors[k].z * Mat2::Identity() + 2.0 * p * p.transpose();
    sum += weight * (own_velocity - neighbor_velocities[k]);
  }
  return -k_a * sum;
}

Vec2 u_dot(std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
           std::span<const Vec2> neighbor_velocities, const Vec2& v_f_hat_rate, double k_a) {
  return shape_term_rate(neighbors, own_velocity, neighbor_velocities, k_a) + v_f_hat_rate;
}

double desired_heading_rate(const Vec2& u, const Vec2& u_dot) {
  const double norm_sq = u.squaredNorm();
  if (std::sqrt(norm_sq) <= kZeroControlThreshold) return 0.0;
  // u^T H u_dot with H = [[0, 1], [-1, 0]]
  return (u.x() * u_dot.y() - u.y() * u_dot.x()) / norm_sq;
}

VelocityCommand velocity_command(const Vec2& u, double theta, double theta_id, double theta_id_dot, double c) {
  const double theta_err = wrap_angle(theta - theta_id);
  return {u.norm() * std::cos(theta_err), -c * theta_err + theta_id_dot};
}

}  // namespace rigidflock
