#include "rigidflock/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace rigidflock {

Graph::Graph(int n, std::vector<std::pair<NodeId, NodeId>> edges) : n_(n) {
  if (n < 0) throw InputError("graph node count must be non-negative");
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 1 || a > n || b < 1 || b > n) {
      throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") has an endpoint outside 1.." +
                       std::to_string(n));
    }
    if (a == b) throw InputError("self-loop on node " + std::to_string(a));
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->i) + "," + std::to_string(dup->j) + ")");
  }

  adjacency_lists_.assign(static_cast<std::size_t>(n), {});
  for (const Edge& e : edges_) {
    adjacency_lists_[e.i - 1].push_back(e.j);
    adjacency_lists_[e.j - 1].push_back(e.i);
  }
  for (auto& list : adjacency_lists_) std::sort(list.begin(), list.end());
}

void Graph::check_node(NodeId i) const {
  if (i < 1 || i > n_) throw InputError("node id " + std::to_string(i) + " outside 1.." + std::to_string(n_));
}

int Graph::edge_index(NodeId i, NodeId j) const {
  const Edge key{std::min(i, j), std::max(i, j)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

const std::vector<NodeId>& Graph::neighbors(NodeId i) const {
  check_node(i);
  return adjacency_lists_[i - 1];
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i - 1, e.j - 1) = 1.0;
    a(e.j - 1, e.i - 1) = 1.0;
  }
  return a;
}

Eigen::MatrixXd Graph::laplacian() const {
  const Eigen::MatrixXd a = adjacency();
  Eigen::MatrixXd l = -a;
  for (int i = 0; i < n_; ++i) l(i, i) = a.row(i).sum();
  return l;
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::queue<NodeId> frontier;
  frontier.push(1);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const NodeId i = frontier.front();
    frontier.pop();
    for (NodeId j : adjacency_lists_[i - 1]) {
      if (!seen[j - 1]) {
        seen[j - 1] = true;
        ++visited;
        frontier.push(j);
      }
    }
  }
  return visited == n_;
}

}  // namespace rigidflock
