#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

#include "ftiss/elevation.hpp"
#include "ftiss/geometry.hpp"
#include "ftiss/graph.hpp"
#include "ftiss/io.hpp"
#include "ftiss/scenario.hpp"

namespace testing {

inline std::string scenario_path(const std::string& file) {
  return std::string(FTISS_SCENARIO_DIR) + "/" + file;
}

inline ftiss::Scenario bundled(const std::string& stem) {
  return ftiss::load_scenario(scenario_path(stem + ".scn"));
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline ftiss::Vec3 random_vec(double scale = 1.0) {
  return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
}

// Uniform on SO(3): normalized Gaussian quaternion.
inline ftiss::Mat3 random_rotation() {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng()), n(rng()), n(rng()), n(rng()));
  q.normalize();
  return q.toRotationMatrix();
}

inline ftiss::Mat3 rot_z(double a) {
  ftiss::Mat3 r;
  r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return r;
}

inline ftiss::FormationGraph complete_graph(int n, int n_leaders) {
  std::vector<ftiss::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return ftiss::FormationGraph(n, n_leaders, edges);
}

// Random points whose pairwise distances all exceed min_gap.
inline ftiss::Positions random_configuration(int n, double spread, double min_gap,
                                             bool planar = false) {
  ftiss::Positions p(3 * n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      p.segment<3>(3 * i) = random_vec(spread);
      if (planar) p(3 * i + 2) = 0.0;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        ok = (p.segment<3>(3 * i) - p.segment<3>(3 * j)).norm() > min_gap;
    if (ok) return p;
  }
}

// Distance-ratio oracle: f_k = |p_head - p_tail| / rho.
inline Eigen::VectorXd distance_oracle(const ftiss::Positions& p, const ftiss::FormationGraph& g,
                                       double rho) {
  Eigen::VectorXd f(g.edge_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    f(k) = (p.segment<3>(3 * e.head) - p.segment<3>(3 * e.tail)).norm() / rho;
  }
  return f;
}

inline Eigen::MatrixXd central_difference_jacobian(const ftiss::Positions& p,
                                                   const ftiss::FormationGraph& g,
                                                   const ftiss::ElevationParams& params,
                                                   double h) {
  Eigen::MatrixXd J(g.edge_count(), p.size());
  for (Eigen::Index c = 0; c < p.size(); ++c) {
    ftiss::Positions plus = p, minus = p;
    plus(c) += h;
    minus(c) -= h;
    J.col(c) = (ftiss::elevation_function(plus, g, params) -
                ftiss::elevation_function(minus, g, params)) /
               (2.0 * h);
  }
  return J;
}

}  // namespace testing
