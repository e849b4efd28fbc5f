#include "rigidflock/interception.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rigidflock/unicycle.hpp"

namespace rigidflock {

Vec2 interception_error(const Vec2& p_target, const Vec2& p_leader) { return p_target - p_leader; }

Vec2 leader_u(const Vec2& e_target, const Vec2& v_target, double k_T) { return k_T * e_target + v_target; }

namespace {
void require_follower(NodeId i, int n) {
  if (i < 1 || i >= n) {
    throw InputError("agent " + std::to_string(i) + " is not a follower (followers are 1.." + std::to_string(n - 1) +
                     ")");
  }
}
}  // namespace

Vec2 follower_u(NodeId i, int n, std::span<const NeighborGeometry> neighbors, const Vec2& e_target_hat,
                const Vec2& v_target_hat, double k_a, double k_T) {
  require_follower(i, n);
  return -k_a * shape_gradient(neighbors) + k_T * e_target_hat + v_target_hat;
}

Vec2 interception_error_rate(const Vec2& e_target, const Vec2& v_target, double leader_theta_err, double k_T) {
  return v_target - b_matrix(leader_theta_err) * (v_target + k_T * e_target);
}

Vec2 leader_u_dot(const Vec2& e_target_dot, const Vec2& a_target, double k_T) {
  return k_T * e_target_dot + a_target;
}

Vec2 follower_u_dot(NodeId i, int n, std::span<const NeighborGeometry> neighbors, const Vec2& own_velocity,
                    std::span<const Vec2> neighbor_velocities, const Vec2& e_target_hat_rate,
                    const Vec2& v_target_hat_rate, double k_a, double k_T) {
  require_follower(i, n);
  return shape_term_rate(neighbors, own_velocity, neighbor_velocities, k_a) + k_T * e_target_hat_rate +
         v_target_hat_rate;
}

Points convex_hull(Points points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  Points hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {
double segment_distance(const Vec2& a, const Vec2& b, const Vec2& q) {
  const Vec2 ab = b - a;
  const double len_sq = ab.squaredNorm();
  if (len_sq == 0.0) return (q - a).norm();
  const double t = std::clamp((q - a).dot(ab) / len_sq, 0.0, 1.0);
  return (a + t * ab - q).norm();
}
}  // namespace

bool convex_hull_contains(std::span<const Vec2> points, const Vec2& q, double tol) {
  if (points.empty()) throw InputError("convex hull of an empty point set");
  const Points hull = convex_hull(Points(points.begin(), points.end()));

  if (hull.size() == 1) return (q - hull[0]).norm() <= tol;
  if (hull.size() == 2) return segment_distance(hull[0], hull[1], q) <= tol;

  bool inside = true;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const Vec2& a = hull[k];
    const Vec2& b = hull[(k + 1) % hull.size()];
    if (cross(b - a, q - a) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return true;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < hull.size(); ++k) {
    best = std::min(best, segment_distance(hull[k], hull[(k + 1) % hull.size()], q));
  }
  return best <= tol;
}

}  // namespace rigidflock
