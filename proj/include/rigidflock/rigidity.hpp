#pragma once

#include <Eigen/Core>

#include "rigidflock/graph.hpp"
#include "rigidflock/types.hpp"

namespace rigidflock {

inline constexpr double kDefaultRankTolerance = 1e-10;

/// A graph together with planar node coordinates.
struct Framework {
  Graph graph;
  Points positions;

  Framework() = default;
  /// Throws InputError when the position count differs from graph.n() or a
  /// coordinate is not finite.
  Framework(Graph g, Points p);
};

/// Desired formation: a rigid framework and the per-edge target distances
/// (canonical edge order).
class TargetFormation {
 public:
  TargetFormation() = default;

  /// Validates minimal and infinitesimal rigidity. When `distances` is given
  /// it must agree with the positions to within 1e-9.
  explicit TargetFormation(Framework framework, const std::vector<double>* distances = nullptr,
                           double rank_tol = kDefaultRankTolerance);

  const Framework& framework() const { return framework_; }
  const Graph& graph() const { return framework_.graph; }
  const Points& positions() const { return framework_.positions; }
  const std::vector<double>& distances() const { return distances_; }

 private:
  Framework framework_;
  std::vector<double> distances_;
};

/// Squared edge lengths in canonical edge order.
Eigen::VectorXd edge_function(const Framework& f);

/// a x 2n matrix; row k for edge (i, j) holds (p_i - p_j) in the columns of
/// node i and (p_j - p_i) in the columns of node j. Equals half the Jacobian
/// of edge_function.
Eigen::MatrixXd rigidity_matrix(const Framework& f);

/// Rigidity matrix with the leader's two columns zeroed. The leader must be
/// node n.
Eigen::MatrixXd reduced_rigidity_matrix(const Framework& f, NodeId leader);

/// Number of singular values above tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double tol = kDefaultRankTolerance);

bool is_infinitesimally_rigid(const Framework& f, double tol = kDefaultRankTolerance);
bool is_minimally_rigid(const Framework& f, double tol = kDefaultRankTolerance);

/// z_k = |p_i - p_j|^2 - d_k^2. Throws InputError if the graphs differ.
Eigen::VectorXd distance_errors(const Framework& f, const TargetFormation& target);

/// Same as distance_errors, for a bare position list on the target's graph.
Eigen::VectorXd distance_errors(const Points& p, const TargetFormation& target);

/// RMS point distance after optimally rotating and translating the target
/// positions onto `p` (no reflections).
double shape_distance(const Points& p, const TargetFormation& target);

}  // namespace rigidflock
