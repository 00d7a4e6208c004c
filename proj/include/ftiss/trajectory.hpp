#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ftiss/geometry.hpp"

namespace ftiss {

struct SimState {
  long long step = 0;
  double t = 0.0;
  Positions p;
  /// Stacked 3n disturbance estimates, each in its follower's local frame.
  /// Leader blocks stay zero.
  Eigen::VectorXd estimate;
};

/// One logged sample.
struct Sample {
  double t = 0.0;
  Positions p;
  Eigen::VectorXd estimate;  // local frames, as in SimState
  Eigen::VectorXd z;         // f_E - f_E*
  double V1 = 0.0;
  double V = 0.0;
  bool gate = false;
  double bound = 0.0;
};

struct TrajectoryLog {
  int agent_count = 0;
  int edge_count = 0;
  std::vector<Sample> samples;
};

}  // namespace ftiss
