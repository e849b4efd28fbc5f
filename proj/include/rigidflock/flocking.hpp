#pragma once

#include <span>
#include <vector>

#include "rigidflock/types.hpp"
#include "rigidflock/unicycle.hpp"

namespace rigidflock {

/// Below this norm u_i is treated as zero: theta_id and its rate are 0.
inline constexpr double kZeroControlThreshold = 1e-12;

struct FlockingGains {
  double k_a = 0.0;
  /// Heading gain per agent.
  std::vector<double> c;
  double alpha = 0.0;

  friend bool operator==(const FlockingGains&, const FlockingGains&) = default;
};

/// What agent i knows about one neighbor j: p_ij = p_i - p_j and
/// z_ij = |p_ij|^2 - d_ij^2. Any common frame works.
struct NeighborGeometry {
  Vec2 rel_position;
  double z = 0.0;
};

struct ControlIntermediates {
  Vec2 u = Vec2::Zero();
  Vec2 u_dot = Vec2::Zero();
  double theta_id = 0.0;
  double theta_id_dot = 0.0;
  double theta_err = 0.0;
};

/// sum_j p_ij z_ij
Vec2 shape_gradient(std::span<const NeighborGeometry> neighbors);

/// u_i = -k_a sum_j p_ij z_ij + v_f_hat_i
Vec2 control_u(std::span<const NeighborGeometry> neighbors, const Vec2& v_f_hat, double k_a);

/// atan2(u_y, u_x), or 0 when |u| <= kZeroControlThreshold.
double desired_heading(const Vec2& u);

/// Time derivative of the shape term, -k_a sum_j (z_ij I + 2 p_ij p_ij^T)(w_i - w_j),
/// where w = B(theta_err) u is each agent's actual velocity.
Vec2 shape_term_rate(std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
                     std::span<const Vec2> neighbor_velocities, double k_a);

/// Flocking u_dot: shape_term_rate plus the flocking-velocity observer rate.
Vec2 u_dot(std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
           std::span<const Vec2> neighbor_velocities, const Vec2& v_f_hat_rate, double k_a);

/// u^T H u_dot / |u|^2 with H = [[0, 1], [-1, 0]]; 0 for |u| below threshold.
double desired_heading_rate(const Vec2& u, const Vec2& u_dot);

/// v = |u| cos(theta_err), omega = -c theta_err + theta_id_dot, with
/// theta_err = wrap(theta - theta_id).
VelocityCommand velocity_command(const Vec2& u, double theta, double theta_id, double theta_id_dot,
                                 double c);

}  // namespace rigidflock
