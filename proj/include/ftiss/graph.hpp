#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ftiss {

/// Oriented edge. Vertex ids are 0-based; `head` gets +1 in the incidence row.
struct Edge {
  int head;
  int tail;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int vertex;
  int edge;
};

/// Undirected, connected sensing graph with a fixed edge orientation and a
/// leader/follower split: vertices [0, n_leaders) are leaders.
class FormationGraph {
 public:
  FormationGraph(int n, int n_leaders, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  int leader_count() const { return n_leaders_; }
  int follower_count() const { return n_ - n_leaders_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool is_leader(int i) const { return i < n_leaders_; }

  /// Neighbors of `i` in ascending vertex order, each with its edge index.
  const std::vector<Neighbor>& incident(int i) const;
  std::vector<int> neighbors(int i) const;

  /// m x n over {0, +1, -1}.
  const Eigen::MatrixXi& incidence() const { return incidence_; }

  /// Number of leading edges that join two leaders. Edges are not reordered;
  /// this counts only the prefix.
  int leading_leader_edges() const;

  friend bool operator==(const FormationGraph& a, const FormationGraph& b) {
    return a.n_ == b.n_ && a.n_leaders_ == b.n_leaders_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  int n_leaders_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  Eigen::MatrixXi incidence_;
};

Eigen::MatrixXi incidence_matrix(const FormationGraph& graph);

/// Follower selector M (n x n): identity on followers, zero on leaders.
Eigen::MatrixXd follower_selector(const FormationGraph& graph);

/// A (x) I_3 for the stacked 3n coordinates.
Eigen::MatrixXd kron_identity3(const Eigen::MatrixXd& a);

}  // namespace ftiss
