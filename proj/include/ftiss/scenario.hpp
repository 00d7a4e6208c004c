#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ftiss/controller.hpp"
#include "ftiss/elevation.hpp"
#include "ftiss/geometry.hpp"
#include "ftiss/graph.hpp"

namespace ftiss {

enum class Integrator { Euler, Rk4 };
enum class DisturbanceFrame { Global, Local };

/// Complete description of one experiment. Vertex ids are 0-based here; the
/// scenario file uses 1-based ids.
struct Scenario {
  std::string name;
  ElevationParams params;
  FormationGraph graph;
  /// Desired inter-agent distance per edge, meters, in edge order.
  std::vector<double> desired_distances;
  ControlGains gains;
  std::vector<AgentFrame> frames;
  Positions p0;
  /// Per-agent constant disturbance as written in the file; leader entries are
  /// ignored and kept zero.
  DisturbanceFrame disturbance_frame = DisturbanceFrame::Global;
  std::vector<Vec3> disturbance;
  Vec3 v_star = Vec3::Zero();
  double dt = 1e-3;
  double t_end = 30.0;
  Integrator integrator = Integrator::Rk4;
  int sample_stride = 10;

  int agent_count() const { return graph.vertex_count(); }
  /// f* = desired distance / rho.
  Eigen::VectorXd f_star() const;
  Vec3 disturbance_local(int i) const;
  Vec3 disturbance_global(int i) const;
  /// floor(t_end / dt), with a little slack for representation error.
  long long step_count() const;
};

/// Field-by-field exact comparison (the name is ignored).
bool operator==(const Scenario& a, const Scenario& b);

/// Builds a scenario with identity frames, zero disturbance and default
/// integration settings; callers fill in the rest.
Scenario make_scenario(std::string name, ElevationParams params, FormationGraph graph,
                       std::vector<double> desired_distances, ControlGains gains, Positions p0);

/// Finds positions realizing the desired distances with the leaders held at
/// their initial positions, starting the followers from p0 (damped
/// Gauss-Newton). Planar scenarios stay in z = 0. Throws
/// Error(InvalidArgument) if the distances cannot be met.
Positions desired_configuration(const Scenario& scenario);

/// Every violated scenario invariant, including (unless disabled) the
/// rigidity of the desired formation. Empty when valid.
std::vector<std::string> validation_problems(const Scenario& scenario,
                                             bool require_rigidity = true);

/// Throws ValidationError listing every problem.
void validate(const Scenario& scenario);

}  // namespace ftiss
