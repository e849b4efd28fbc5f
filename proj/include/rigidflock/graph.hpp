#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rigidflock/types.hpp"

namespace rigidflock {

/// 1-based node id, as used in every public interface.
using NodeId = int;

struct Edge {
  NodeId i;
  NodeId j;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes 1..n.
///
/// Edges are normalized to (min, max) and sorted lexicographically on
/// construction; that order is the row order of every per-edge vector and
/// matrix in the library. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Throws InputError on self-loops, duplicate edges or out-of-range ids.
  Graph(int n, std::vector<std::pair<NodeId, NodeId>> edges);

  int n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Index of edge {i, j} in canonical order, or -1 when absent.
  int edge_index(NodeId i, NodeId j) const;
  bool has_edge(NodeId i, NodeId j) const { return edge_index(i, j) >= 0; }

  /// Sorted neighbor ids of node i.
  const std::vector<NodeId>& neighbors(NodeId i) const;

  Eigen::MatrixXd adjacency() const;
  Eigen::MatrixXd laplacian() const;

  /// Breadth-first reachability from node 1. A single node counts as connected.
  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  void check_node(NodeId i) const;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_lists_;
};

}  // namespace rigidflock
