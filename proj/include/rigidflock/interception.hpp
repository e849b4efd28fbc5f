#pragma once

#include <span>

#include "rigidflock/flocking.hpp"
#include "rigidflock/graph.hpp"
#include "rigidflock/types.hpp"

namespace rigidflock {

struct TargetState {
  Vec2 p = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  Vec2 a = Vec2::Zero();
};

struct InterceptionGains {
  double k_a = 0.0;
  std::vector<double> c;
  double k_T = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double gamma_T1 = 0.0;
  double gamma_T2 = 0.0;

  friend bool operator==(const InterceptionGains&, const InterceptionGains&) = default;
};

/// e_T = p_T - p_n
Vec2 interception_error(const Vec2& p_target, const Vec2& p_leader);

/// u_n = k_T e_T + v_T
Vec2 leader_u(const Vec2& e_target, const Vec2& v_target, double k_T);

/// u_i = -k_a sum_j p_ij z_ij + k_T e_hat_i + v_hat_i, for followers i < n.
/// Throws InputError when i is not a follower.
Vec2 follower_u(NodeId i, int n, std::span<const NeighborGeometry> neighbors, const Vec2& e_target_hat,
                const Vec2& v_target_hat, double k_a, double k_T);

/// e_T_dot = v_T - B(theta_err_n)(v_T + k_T e_T)
Vec2 interception_error_rate(const Vec2& e_target, const Vec2& v_target, double leader_theta_err, double k_T);

/// u_n_dot = k_T e_T_dot + a_T
Vec2 leader_u_dot(const Vec2& e_target_dot, const Vec2& a_target, double k_T);

/// Follower analogue of the flocking u_dot with the feedforward rate
/// k_T e_hat_dot + v_hat_dot.
Vec2 follower_u_dot(NodeId i, int n, std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
                    std::span<const Vec2> neighbor_velocities, const Vec2& e_target_hat_rate,
                    const Vec2& v_target_hat_rate, double k_a, double k_T);

/// Counterclockwise convex hull (Andrew's monotone chain), collinear points
/// dropped.
Points convex_hull(Points points);

/// True when q lies inside the hull of `points` or within `tol` of it.
/// Degenerate hulls fall back to a point/segment distance test. Throws
/// InputError on an empty point list.
bool convex_hull_contains(std::span<const Vec2> points, const Vec2& q, double tol = 1e-9);

}  // namespace rigidflock
