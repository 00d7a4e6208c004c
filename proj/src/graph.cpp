#include "ftiss/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "ftiss/errors.hpp"

namespace ftiss {

FormationGraph::FormationGraph(int n, int n_leaders, std::vector<Edge> edges)
    : n_(n), n_leaders_(n_leaders), edges_(std::move(edges)) {
  if (n < 2) throw Error(ErrorCode::InvalidGraph, "need at least two vertices");
  if (n_leaders < 1 || n_leaders > n) {
    std::ostringstream os;
    os << "leader count " << n_leaders << " must lie in [1, " << n << "]";
    throw Error(ErrorCode::InvalidGraph, os.str());
  }

  std::set<std::pair<int, int>> seen;
  adjacency_.resize(n);
  for (int k = 0; k < edge_count(); ++k) {
    const auto [h, t] = edges_[k];
    if (h < 0 || h >= n || t < 0 || t >= n) {
      std::ostringstream os;
      os << "edge " << k + 1 << " references vertex outside 1.." << n;
      throw Error(ErrorCode::UnknownVertex, os.str());
    }
    if (h == t) {
      std::ostringstream os;
      os << "edge " << k + 1 << " is a self-loop on vertex " << h + 1;
      throw Error(ErrorCode::InvalidGraph, os.str());
    }
    if (!seen.emplace(std::min(h, t), std::max(h, t)).second) {
      std::ostringstream os;
      os << "edge " << k + 1 << " duplicates (" << h + 1 << "," << t + 1 << ")";
      throw Error(ErrorCode::InvalidGraph, os.str());
    }
    adjacency_[h].push_back({t, k});
    adjacency_[t].push_back({h, k});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  // connectivity by DFS from vertex 0
  std::vector<bool> visited(n, false);
  std::vector<int> stack{0};
  visited[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& nb : adjacency_[v]) {
      if (!visited[nb.vertex]) {
        visited[nb.vertex] = true;
        ++reached;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (reached != n) {
    std::ostringstream os;
    os << "only " << reached << " of " << n << " vertices reachable from vertex 1";
    throw Error(ErrorCode::DisconnectedGraph, os.str());
  }

  incidence_ = Eigen::MatrixXi::Zero(edge_count(), n);
  for (int k = 0; k < edge_count(); ++k) {
    incidence_(k, edges_[k].head) = 1;
    incidence_(k, edges_[k].tail) = -1;
  }
}

const std::vector<Neighbor>& FormationGraph::incident(int i) const {
  if (i < 0 || i >= n_) {
    std::ostringstream os;
    os << "vertex " << i + 1 << " not in 1.." << n_;
    throw Error(ErrorCode::UnknownVertex, os.str());
  }
  return adjacency_[i];
}

std::vector<int> FormationGraph::neighbors(int i) const {
  std::vector<int> out;
  for (const auto& nb : incident(i)) out.push_back(nb.vertex);
  return out;
}

int FormationGraph::leading_leader_edges() const {
  int count = 0;
  for (const auto& e : edges_) {
    if (!(is_leader(e.head) && is_leader(e.tail))) break;
    ++count;
  }
  return count;
}

Eigen::MatrixXi incidence_matrix(const FormationGraph& graph) { return graph.incidence(); }

Eigen::MatrixXd follower_selector(const FormationGraph& graph) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(graph.vertex_count(), graph.vertex_count());
  for (int i = graph.leader_count(); i < graph.vertex_count(); ++i) m(i, i) = 1.0;
  return m;
}

Eigen::MatrixXd kron_identity3(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(3 * a.rows(), 3 * a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (a(r, c) != 0.0) out.block<3, 3>(3 * r, 3 * c) = a(r, c) * Eigen::Matrix3d::Identity();
    }
  }
  return out;
}

}  // namespace ftiss
