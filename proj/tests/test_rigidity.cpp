#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rigidflock/rigidity.hpp"

using namespace rigidflock;

namespace {

Framework triangle() { return Framework(Graph(3, {{1, 2}, {1, 3}, {2, 3}}), {{0, 0}, {1, 0}, {0, 1}}); }

Points isometry(const Points& p, double angle, const Vec2& t) {
  Points out;
  for (const Vec2& q : p) out.push_back(rotation(angle) * q + t);
  return out;
}

}  // namespace

TEST_CASE("framework validation") {
  CHECK_THROWS_AS(Framework(Graph(3, {}), {{0, 0}, {1, 0}}), InputError);
  CHECK_THROWS_AS(Framework(Graph(2, {}), {{0, 0}, {std::nan(""), 0}}), InputError);
}

TEST_CASE("edge function of a triangle") {
  const Eigen::VectorXd phi = edge_function(triangle());
  CHECK(phi(0) == doctest::Approx(1.0));
  CHECK(phi(1) == doctest::Approx(1.0));
  CHECK(phi(2) == doctest::Approx(2.0));
}

TEST_CASE("pentagon side and diagonal squared lengths") {
  const auto oracle_sq = oracle::squared_lengths(oracle::pentagon_edges(), oracle::pentagon());
  const double side_sq = 0.013819660112501051;
  const double diag_sq = 0.03618033988749895;
  CHECK(std::abs(side_sq - 0.013820) < 5e-7);
  CHECK(std::abs(diag_sq - 0.036180) < 5e-7);

  const Eigen::VectorXd phi = edge_function(oracle::pentagon_framework());
  const Graph& g = oracle::pentagon_framework().graph;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto [i, j] = g.edges()[k];
    const bool side = j - i == 1 || (i == 1 && j == 5);
    CHECK(phi(k) == doctest::Approx(side ? side_sq : diag_sq).epsilon(1e-12));
    CHECK(oracle_sq[k] == doctest::Approx(phi(k)).epsilon(1e-14));
  }
}

TEST_CASE("pentagon target distances") {
  const TargetFormation t(oracle::pentagon_framework());
  for (double d : t.distances()) {
    const bool side = std::abs(d - 0.117557) < 1e-6;
    const bool diag = std::abs(d - 0.190211) < 1e-6;
    CHECK((side || diag));
  }
}

TEST_CASE("rigidity matrix of a triangle") {
  const Eigen::MatrixXd r = rigidity_matrix(triangle());
  Eigen::RowVectorXd row(6);
  row << -1, 0, 1, 0, 0, 0;
  CHECK(r.row(0) == row);
  CHECK(numerical_rank(r) == 3);
  CHECK(oracle::gaussian_rank(r) == 3);
}

TEST_CASE("rigidity matrix equals half the finite-difference Jacobian") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 5;
    const auto edges = oracle::random_edges(rng, n, 0.6);
    const Framework f = oracle::random_framework(rng, n, edges);
    CHECK((rigidity_matrix(f) - oracle::fd_rigidity_matrix(edges, f.positions)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("infinitesimal rigidity examples") {
  CHECK(is_infinitesimally_rigid(oracle::pentagon_framework()));
  CHECK(numerical_rank(rigidity_matrix(oracle::pentagon_framework())) == 7);
  CHECK(oracle::gaussian_rank(rigidity_matrix(oracle::pentagon_framework())) == 7);

  const Points collinear{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  CHECK_FALSE(is_infinitesimally_rigid(Framework(Graph(4, oracle::complete_edges(4)), collinear)));

  const Framework square(Graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(oracle::gaussian_rank(rigidity_matrix(square)) == 4);
  CHECK(numerical_rank(rigidity_matrix(square)) == 4);
  CHECK_FALSE(is_infinitesimally_rigid(square));
}

TEST_CASE("rigidity tests need three nodes") {
  const Framework two(Graph(2, {{1, 2}}), {{0, 0}, {1, 0}});
  CHECK_THROWS_AS(is_infinitesimally_rigid(two), UnsupportedSizeError);
  CHECK_THROWS_AS(is_minimally_rigid(two), UnsupportedSizeError);
}

TEST_CASE("minimal rigidity examples") {
  CHECK(is_minimally_rigid(oracle::pentagon_framework()));
  CHECK(is_minimally_rigid(triangle()));
  auto edges = oracle::pentagon_edges();
  edges.emplace_back(2, 5);
  CHECK_FALSE(is_minimally_rigid(Framework(Graph(5, edges), oracle::pentagon())));
  CHECK(is_infinitesimally_rigid(Framework(Graph(5, edges), oracle::pentagon())));
}

TEST_CASE("target formation validation") {
  CHECK_NOTHROW(TargetFormation(oracle::pentagon_framework()));
  const Framework square(Graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK_THROWS_AS(TargetFormation{square}, InputError);

  std::vector<double> good{1.0, 1.0, std::sqrt(2.0)};
  CHECK_NOTHROW(TargetFormation(triangle(), &good));
  std::vector<double> bad{1.0, 1.0, 1.5};
  CHECK_THROWS_AS(TargetFormation(triangle(), &bad), InputError);
}

TEST_CASE("distance error examples") {
  const TargetFormation t(oracle::pentagon_framework());
  CHECK(distance_errors(oracle::pentagon_framework(), t).cwiseAbs().maxCoeff() < 1e-15);

  Points scaled = oracle::pentagon();
  for (Vec2& q : scaled) q *= 2.0;
  const Eigen::VectorXd z = distance_errors(scaled, t);
  for (std::size_t k = 0; k < t.distances().size(); ++k) {
    CHECK(z(k) == doctest::Approx(3.0 * t.distances()[k] * t.distances()[k]).epsilon(1e-12));
  }

  const TargetFormation unit(Framework(Graph(3, {{1, 2}, {1, 3}, {2, 3}}), {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
  const Eigen::VectorXd z2 = distance_errors(Points{{0, 0}, {2, 0}, {0.5, std::sqrt(3.0) / 2}}, unit);
  CHECK(z2(0) == doctest::Approx(3.0));

  CHECK_THROWS_AS(distance_errors(triangle(), t), InputError);
}

TEST_CASE("reduced rigidity matrix") {
  const Eigen::MatrixXd r = rigidity_matrix(triangle());
  const Eigen::MatrixXd r0 = reduced_rigidity_matrix(triangle(), 3);
  CHECK(r0.rightCols(2).isZero());
  CHECK(r0.leftCols(4) == r.leftCols(4));
  CHECK_THROWS_AS(reduced_rigidity_matrix(triangle(), 2), InputError);
}

TEST_CASE("property: R R0^T = R0 R0^T and rank(R0) = rank(R)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    const Framework f = oracle::random_framework(rng, n, oracle::complete_edges(n));
    const Eigen::MatrixXd r = rigidity_matrix(f);
    const Eigen::MatrixXd r0 = reduced_rigidity_matrix(f, n);
    CHECK((r * r0.transpose() - r0 * r0.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(numerical_rank(r0) == numerical_rank(r));
  }
}

TEST_CASE("property: rigid translations lie in the null space of R") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 6;
    const Framework f = oracle::random_framework(rng, n, oracle::random_edges(rng, n, 0.7));
    const Vec2 x(u(rng), u(rng));
    Eigen::VectorXd stacked(2 * n);
    for (int k = 0; k < n; ++k) stacked.segment<2>(2 * k) = x;
    CHECK((rigidity_matrix(f) * stacked).norm() < 1e-12);
  }
}

TEST_CASE("property: isometry invariance of edge function and rank") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 6;
    const auto edges = oracle::random_edges(rng, n, 0.6);
    const Framework f = oracle::random_framework(rng, n, edges);
    const Framework g(f.graph, isometry(f.positions, u(rng), Vec2(u(rng), u(rng))));
    if (edges.empty()) continue;
    CHECK((edge_function(f) - edge_function(g)).cwiseAbs().maxCoeff() < 1e-12 * 50);
    CHECK(numerical_rank(rigidity_matrix(f)) == numerical_rank(rigidity_matrix(g)));
  }
}

TEST_CASE("property: directional derivative of z is 2 R v") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 4;
    const Framework f = oracle::random_framework(rng, n, oracle::fan_edges(n));
    const TargetFormation t(f);
    Eigen::VectorXd v(2 * n);
    for (int k = 0; k < 2 * n; ++k) v(k) = u(rng);
    Points moved = f.positions;
    const double h = 1e-7;
    for (int k = 0; k < n; ++k) moved[k] += h * v.segment<2>(2 * k);
    const Eigen::VectorXd fd = (distance_errors(moved, t) - distance_errors(f, t)) / h;
    CHECK((fd - 2.0 * rigidity_matrix(f) * v).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("shape distance examples") {
  const TargetFormation t(oracle::pentagon_framework());
  CHECK(shape_distance(isometry(oracle::pentagon(), 1.234, Vec2(3, -2)), t) < 1e-9);

  Points nudged = oracle::pentagon();
  nudged[2].x() += 0.01;
  CHECK(shape_distance(nudged, t) <= 0.01);
  CHECK(shape_distance(nudged, t) == doctest::Approx(oracle::brute_force_shape_distance(nudged, t.positions())).epsilon(1e-6));

  Points reflected;
  for (const Vec2& q : oracle::pentagon()) reflected.emplace_back(-q.x(), q.y());
  const double brute = oracle::brute_force_shape_distance(reflected, t.positions());
  CHECK(brute > 1e-3);
  CHECK(shape_distance(reflected, t) == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("property: closed-form alignment matches brute force on random frameworks") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    const Framework f = oracle::random_framework(rng, n, oracle::fan_edges(n));
    const TargetFormation t(f);
    const Framework other = oracle::random_framework(rng, n, oracle::fan_edges(n));
    CHECK(shape_distance(other.positions, t) ==
          doctest::Approx(oracle::brute_force_shape_distance(other.positions, f.positions)).epsilon(1e-6));
  }
}
