#include "rigidflock/rigidity.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace rigidflock {

Framework::Framework(Graph g, Points p) : graph(std::move(g)), positions(std::move(p)) {
  if (static_cast<int>(positions.size()) != graph.n()) {
    throw InputError("framework has " + std::to_string(positions.size()) + " positions for " +
                     std::to_string(graph.n()) + " nodes");
  }
  for (const Vec2& q : positions) {
    if (!q.allFinite()) throw InputError("framework coordinates must be finite");
  }
}

TargetFormation::TargetFormation(Framework framework, const std::vector<double>* distances, double rank_tol)
    : framework_(std::move(framework)) {
  const Eigen::VectorXd squared = edge_function(framework_);
  distances_.resize(static_cast<std::size_t>(squared.size()));
  for (Eigen::Index k = 0; k < squared.size(); ++k) distances_[k] = std::sqrt(squared[k]);

  for (std::size_t k = 0; k < distances_.size(); ++k) {
    if (!(distances_[k] > 0.0)) {
      const Edge& e = framework_.graph.edges()[k];
      throw InputError("target distance for edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                       ") must be positive");
    }
  }
  if (distances != nullptr) {
    if (distances->size() != distances_.size()) {
      throw InputError("expected " + std::to_string(distances_.size()) + " distances, got " +
                       std::to_string(distances->size()));
    }
    for (std::size_t k = 0; k < distances_.size(); ++k) {
      if (std::abs((*distances)[k] - distances_[k]) > 1e-9) {
        const Edge& e = framework_.graph.edges()[k];
        throw InputError("distance for edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                         ") disagrees with the positions");
      }
    }
  }
  if (!is_minimally_rigid(framework_, rank_tol)) {
    throw InputError("target formation must be infinitesimally and minimally rigid");
  }
}

Eigen::VectorXd edge_function(const Framework& f) {
  const auto& edges = f.graph.edges();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    phi[static_cast<Eigen::Index>(k)] = (f.positions[edges[k].i - 1] - f.positions[edges[k].j - 1]).squaredNorm();
  }
  return phi;
}

Eigen::MatrixXd rigidity_matrix(const Framework& f) {
  const auto& edges = f.graph.edges();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()), 2 * f.graph.n());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const int i = edges[k].i - 1;
    const int j = edges[k].j - 1;
    const Vec2 d = f.positions[i] - f.positions[j];
    const auto row = static_cast<Eigen::Index>(k);
    r.block<1, 2>(row, 2 * i) = d.transpose();
    r.block<1, 2>(row, 2 * j) = -d.transpose();
  }
  return r;
}

Eigen::MatrixXd reduced_rigidity_matrix(const Framework& f, NodeId leader) {
  if (leader != f.graph.n()) {
    throw InputError("leader must be node " + std::to_string(f.graph.n()) + ", got " + std::to_string(leader));
  }
  Eigen::MatrixXd r = rigidity_matrix(f);
  r.middleCols<2>(2 * (leader - 1)).setZero();
  return r;
}

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  if (sigma_max == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > tol * sigma_max) ++rank;
  }
  return rank;
}

namespace {
void require_rigidity_size(const Framework& f) {
  if (f.graph.n() < 3) throw UnsupportedSizeError("rigidity tests need at least 3 nodes");
}
}  // namespace

bool is_infinitesimally_rigid(const Framework& f, double tol) {
  require_rigidity_size(f);
  return numerical_rank(rigidity_matrix(f), tol) == 2 * f.graph.n() - 3;
}

bool is_minimally_rigid(const Framework& f, double tol) {
  require_rigidity_size(f);
  return static_cast<int>(f.graph.edge_count()) == 2 * f.graph.n() - 3 && is_infinitesimally_rigid(f, tol);
}

Eigen::VectorXd distance_errors(const Points& p, const TargetFormation& target) {
  if (static_cast<int>(p.size()) != target.graph().n()) {
    throw InputError("position count does not match the target formation");
  }
  const auto& edges = target.graph().edges();
  Eigen::VectorXd z(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double d = target.distances()[k];
    z[static_cast<Eigen::Index>(k)] = (p[edges[k].i - 1] - p[edges[k].j - 1]).squaredNorm() - d * d;
  }
  return z;
}

Eigen::VectorXd distance_errors(const Framework& f, const TargetFormation& target) {
  if (!(f.graph == target.graph())) throw InputError("framework graph differs from the target formation graph");
  return distance_errors(f.positions, target);
}

double shape_distance(const Points& p, const TargetFormation& target) {
  const Points& q = target.positions();
  if (p.size() != q.size()) throw InputError("position count does not match the target formation");
  if (p.empty()) return 0.0;

  Vec2 p_mean = Vec2::Zero();
  Vec2 q_mean = Vec2::Zero();
  for (std::size_t k = 0; k < p.size(); ++k) {
    p_mean += p[k];
    q_mean += q[k];
  }
  p_mean /= static_cast<double>(p.size());
  q_mean /= static_cast<double>(q.size());

  // Best rotation of q onto p maximizes sum dot(R q_k, p_k).
  double dot_sum = 0.0;
  double cross_sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec2 a = q[k] - q_mean;
    const Vec2 b = p[k] - p_mean;
    dot_sum += a.dot(b);
    cross_sum += cross(a, b);
  }
  const Mat2 rot = rotation(std::atan2(cross_sum, dot_sum));

  double sum_sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum_sq += (rot * (q[k] - q_mean) - (p[k] - p_mean)).squaredNorm();
  }
  return std::sqrt(sum_sq / static_cast<double>(p.size()));
}

}  // namespace rigidflock
