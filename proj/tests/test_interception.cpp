#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rigidflock/interception.hpp"
#include "rigidflock/unicycle.hpp"

using namespace rigidflock;
using std::numbers::pi;

TEST_CASE("interception_error examples") {
  CHECK(interception_error(Vec2(1, 2), Vec2(1, 2)) == Vec2::Zero());
  CHECK(interception_error(Vec2(1, 2), Vec2(0, 0)) == Vec2(1, 2));
  CHECK(interception_error(Vec2(0.3, -1), Vec2(2, 5)) == -interception_error(Vec2(2, 5), Vec2(0.3, -1)));
}

TEST_CASE("leader_u examples") {
  CHECK(leader_u(Vec2::Zero(), Vec2(0.1, 0.2), 1.0) == Vec2(0.1, 0.2));
  CHECK(leader_u(Vec2(1, 0), Vec2::Zero(), 2.0) == Vec2(2, 0));
  const Vec2 e(0.3, -0.4);
  CHECK((leader_u(3 * e, Vec2::Zero(), 1.5) - 3 * leader_u(e, Vec2::Zero(), 1.5)).norm() < 1e-15);
}

TEST_CASE("follower_u examples") {
  const Vec2 e(0.2, 0.1);
  const Vec2 v(0.0, 0.06);
  const std::vector<NeighborGeometry> exact{{Vec2(0.1, 0.0), 0.0}};
  CHECK((follower_u(1, 6, exact, e, v, 6.0, 1.0) - leader_u(e, v, 1.0)).norm() < 1e-15);
  CHECK(follower_u(2, 6, exact, Vec2::Zero(), Vec2::Zero(), 6.0, 1.0) == Vec2::Zero());
  const std::vector<NeighborGeometry> one{{Vec2(0, 1), -1.0}};
  CHECK(follower_u(1, 3, one, Vec2::Zero(), Vec2::Zero(), 2.0, 1.0) == Vec2(0, 2));
}

TEST_CASE("follower functions reject the leader") {
  const std::vector<NeighborGeometry> none;
  CHECK_THROWS_AS(follower_u(3, 3, none, Vec2::Zero(), Vec2::Zero(), 1.0, 1.0), InputError);
  CHECK_THROWS_AS(follower_u(0, 3, none, Vec2::Zero(), Vec2::Zero(), 1.0, 1.0), InputError);
  CHECK_THROWS_AS(follower_u_dot(3, 3, none, Vec2::Zero(), {}, Vec2::Zero(), Vec2::Zero(), 1.0, 1.0), InputError);
}

TEST_CASE("leader_u_dot examples") {
  const Vec2 v_t(0.1, -0.05);
  const Vec2 a_t(0.01, 0.02);
  const Vec2 e_dot0 = interception_error_rate(Vec2::Zero(), v_t, 0.0, 1.0);
  CHECK(e_dot0.norm() < 1e-15);
  CHECK((leader_u_dot(e_dot0, a_t, 1.0) - a_t).norm() < 1e-15);

  CHECK((interception_error_rate(Vec2(0.4, 0.2), v_t, pi / 2, 1.0) - v_t).norm() < 1e-15);

  const Vec2 e(0.3, -0.2);
  const double k_t = 1.7;
  const Vec2 e_dot = interception_error_rate(e, Vec2::Zero(), 0.0, k_t);
  CHECK((e_dot + k_t * e).norm() < 1e-15);
  CHECK((leader_u_dot(e_dot, Vec2::Zero(), k_t) + k_t * k_t * e).norm() < 1e-15);
}

TEST_CASE("follower_u_dot examples") {
  const std::vector<NeighborGeometry> geo{{Vec2(0.1, 0.2), 0.003}, {Vec2(-0.2, 0.05), -0.001}};
  const std::vector<Vec2> same{Vec2(0.1, 0.1), Vec2(0.1, 0.1)};
  CHECK(follower_u_dot(1, 4, geo, Vec2(0.1, 0.1), same, Vec2::Zero(), Vec2::Zero(), 6.0, 1.0).norm() < 1e-15);

  const std::vector<Vec2> other{Vec2(0.05, -0.1), Vec2(-0.02, 0.03)};
  const Vec2 w(0.1, 0.2);
  const Vec2 rate(0.3, -0.4);
  CHECK((follower_u_dot(1, 4, geo, w, other, Vec2(9, 9), rate, 6.0, 0.0) - u_dot(geo, w, other, rate, 6.0)).norm() <
        1e-15);

  const std::vector<NeighborGeometry> edge{{Vec2(-1, 0), 0.0}};
  const std::vector<Vec2> still{Vec2::Zero()};
  CHECK(follower_u_dot(1, 2, edge, Vec2(1, 0), still, Vec2::Zero(), Vec2::Zero(), 1.0, 1.0) == Vec2(-2, 0));
}

TEST_CASE("property: exact estimates make followers the flocking law with v0 = v_T + k_T e_T") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::vector<NeighborGeometry> geo{{Vec2(u(rng), u(rng)), u(rng)}, {Vec2(u(rng), u(rng)), u(rng)}};
    const Vec2 e(u(rng), u(rng));
    const Vec2 v(u(rng), u(rng));
    const double k_t = 1.0 + u(rng) * 0.5;
    CHECK((follower_u(1, 5, geo, e, v, 6.0, k_t) - control_u(geo, v + k_t * e, 6.0)).norm() < 1e-14);
  }
}

TEST_CASE("convex hull containment examples") {
  const Points square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(convex_hull_contains(square, Vec2(0.5, 0.5)));
  CHECK_FALSE(convex_hull_contains(square, Vec2(2, 2)));
  CHECK(convex_hull_contains(square, Vec2(0.5, 0.0), 1e-9));
  CHECK(convex_hull_contains(square, Vec2(1.0, 1.0)));
  CHECK_FALSE(convex_hull_contains(square, Vec2(0.5, -1e-6), 1e-9));
}

TEST_CASE("degenerate hulls fall back to distance tests") {
  const Points one{{1, 1}};
  CHECK(convex_hull_contains(one, Vec2(1, 1)));
  CHECK_FALSE(convex_hull_contains(one, Vec2(1, 1.1)));
  const Points line{{0, 0}, {1, 1}, {2, 2}};
  CHECK(convex_hull_contains(line, Vec2(1.5, 1.5)));
  CHECK_FALSE(convex_hull_contains(line, Vec2(1.5, 1.6)));
  CHECK_FALSE(convex_hull_contains(line, Vec2(3, 3)));
  CHECK_THROWS_AS(convex_hull_contains(Points{}, Vec2(0, 0)), InputError);
}

TEST_CASE("property: hull containment agrees with triangle enumeration") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    Points pts;
    const int n = 3 + trial % 6;
    for (int k = 0; k < n; ++k) pts.emplace_back(u(rng), u(rng));
    const Vec2 q(1.3 * u(rng), 1.3 * u(rng));
    CHECK(convex_hull_contains(pts, q) == oracle::carath_contains(pts, q));
  }
}

TEST_CASE("convex hull is counterclockwise and drops interior points") {
  const Points hull = convex_hull({{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}, {1, 0}});
  CHECK(hull.size() == 4);
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const Vec2& a = hull[k];
    const Vec2& b = hull[(k + 1) % hull.size()];
    const Vec2& c = hull[(k + 2) % hull.size()];
    CHECK(cross(b - a, c - b) > 0);
  }
}
