#include "ftiss/scenario.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "ftiss/errors.hpp"

namespace ftiss {

Eigen::VectorXd Scenario::f_star() const {
  Eigen::VectorXd f(static_cast<Eigen::Index>(desired_distances.size()));
  for (std::size_t k = 0; k < desired_distances.size(); ++k) f(k) = desired_distances[k] / params.rho;
  return f;
}

Vec3 Scenario::disturbance_local(int i) const {
  if (graph.is_leader(i)) return Vec3::Zero();
  return disturbance_frame == DisturbanceFrame::Local ? disturbance[i]
                                                      : direction_to_local(disturbance[i], frames[i]);
}

Vec3 Scenario::disturbance_global(int i) const {
  if (graph.is_leader(i)) return Vec3::Zero();
  return disturbance_frame == DisturbanceFrame::Global
             ? disturbance[i]
             : direction_from_local(disturbance[i], frames[i]);
}

long long Scenario::step_count() const {
  return static_cast<long long>(std::floor(t_end / dt + 1e-9));
}

bool operator==(const Scenario& a, const Scenario& b) {
  auto same_vec = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.size() == y.size() && x == y;
  };
  return a.params == b.params && a.graph == b.graph &&
         a.desired_distances == b.desired_distances && a.gains == b.gains &&
         a.frames == b.frames && same_vec(a.p0, b.p0) &&
         a.disturbance_frame == b.disturbance_frame && a.disturbance == b.disturbance &&
         a.v_star == b.v_star && a.dt == b.dt && a.t_end == b.t_end &&
         a.integrator == b.integrator && a.sample_stride == b.sample_stride;
}

Scenario make_scenario(std::string name, ElevationParams params, FormationGraph graph,
                       std::vector<double> desired_distances, ControlGains gains, Positions p0) {
  const int n = graph.vertex_count();
  Scenario s{
      .name = std::move(name),
      .params = params,
      .graph = std::move(graph),
      .desired_distances = std::move(desired_distances),
      .gains = gains,
      .frames = std::vector<AgentFrame>(n),
      .p0 = std::move(p0),
      .disturbance = std::vector<Vec3>(n, Vec3::Zero()),
  };
  return s;
}

namespace {

struct FreeCoordinates {
  std::vector<int> index;  // position in the stacked 3n vector
};

FreeCoordinates free_coordinates(const Scenario& s) {
  FreeCoordinates out;
  const int axes = s.params.dimension();
  for (int i = s.graph.leader_count(); i < s.agent_count(); ++i) {
    for (int a = 0; a < axes; ++a) out.index.push_back(3 * i + a);
  }
  return out;
}

Eigen::VectorXd distance_residual(const Positions& p, const Scenario& s) {
  Eigen::VectorXd r(s.graph.edge_count());
  for (int k = 0; k < s.graph.edge_count(); ++k) {
    const Edge& e = s.graph.edges()[k];
    r(k) = (agent_position(p, e.head) - agent_position(p, e.tail)).norm() - s.desired_distances[k];
  }
  return r;
}

}  // namespace

Positions desired_configuration(const Scenario& s) {
  const auto free = free_coordinates(s);
  const int m = s.graph.edge_count();
  const int nfree = static_cast<int>(free.index.size());
  Positions p = s.p0;

  Eigen::VectorXd r = distance_residual(p, s);
  double cost = r.squaredNorm();
  double damping = 1e-3;
  for (int iter = 0; iter < 500 && r.cwiseAbs().maxCoeff() > 1e-14; ++iter) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, nfree);
    for (int k = 0; k < m; ++k) {
      const Edge& e = s.graph.edges()[k];
      const Vec3 d = agent_position(p, e.head) - agent_position(p, e.tail);
      const double l = d.norm();
      if (l < kCoincidenceThreshold) continue;
      const Vec3 g = d / l;
      for (int c = 0; c < nfree; ++c) {
        const int agent = free.index[c] / 3;
        const int axis = free.index[c] % 3;
        if (agent == e.head) jac(k, c) += g(axis);
        if (agent == e.tail) jac(k, c) -= g(axis);
      }
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      const Eigen::MatrixXd lhs =
          jtj + damping * Eigen::MatrixXd::Identity(nfree, nfree);
      const Eigen::VectorXd delta = lhs.ldlt().solve(-jtr);
      Positions trial = p;
      for (int c = 0; c < nfree; ++c) trial(free.index[c]) += delta(c);
      const Eigen::VectorXd r_trial = distance_residual(trial, s);
      const double trial_cost = r_trial.squaredNorm();
      if (trial_cost < cost) {
        p = std::move(trial);
        r = r_trial;
        cost = trial_cost;
        damping = std::max(damping / 3.0, 1e-15);
        improved = true;
      } else {
        damping *= 4.0;
      }
    }
    if (!improved) break;
  }

  const double worst = m > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  if (!(worst < 1e-9)) {
    std::ostringstream os;
    os << "desired distances are not realizable with the leaders at their initial positions "
          "(worst edge residual "
       << worst << " m)";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return p;
}

std::vector<std::string> validation_problems(const Scenario& s, bool require_rigidity) {
  std::vector<std::string> out;
  auto problem = [&out](const std::string& msg) { out.push_back(msg); };

  const int n = s.agent_count();
  const int m = s.graph.edge_count();
  const bool planar = s.params.mode == ElevationMode::Planar2D;

  if (!(s.params.rho > 0.0)) problem("formation.rho must be positive");
  try {
    validate(s.gains);
  } catch (const Error& e) {
    problem(std::string("gains: ") + e.what());
  }
  if (!(s.dt > 0.0)) problem("sim.dt must be positive");
  if (!(s.t_end > 0.0)) problem("sim.t_end must be positive");
  if (s.dt > 0.0 && s.t_end > 0.0 && s.dt > s.t_end) problem("sim.dt exceeds sim.t_end");
  if (s.sample_stride < 1) problem("sim.sample_stride must be at least 1");
  if (s.graph.leader_count() < 2) problem("formation.n_leaders: at least two leaders are required");

  bool shapes_ok = true;
  if (static_cast<int>(s.desired_distances.size()) != m) {
    problem("formation.distances must list one value per edge");
    shapes_ok = false;
  }
  if (s.p0.size() != 3 * n) {
    problem("initial positions must be given for every agent");
    shapes_ok = false;
  }
  if (static_cast<int>(s.frames.size()) != n || static_cast<int>(s.disturbance.size()) != n) {
    problem("frames and disturbances must have one entry per agent");
    shapes_ok = false;
  }
  if (!shapes_ok) return out;

  for (int k = 0; k < m; ++k) {
    const double d = s.desired_distances[k];
    if (!(d > 0.0)) {
      problem("formation.distances: edge " + std::to_string(k + 1) + " must be positive");
    } else if (!planar && s.params.rho > 0.0 && !(d > 2.0 * s.params.rho)) {
      problem("formation.distances: edge " + std::to_string(k + 1) +
              " is not longer than 2 rho (balls would overlap)");
    }
  }

  if (planar) {
    for (int i = 0; i < n; ++i) {
      if (s.p0(3 * i + 2) != 0.0) {
        problem("initial.p" + std::to_string(i + 1) + ": planar scenarios require z = 0");
      }
      if (std::abs(s.frames[i].rotation()(2, 2) - 1.0) > kRotationTolerance) {
        problem("initial.frame" + std::to_string(i + 1) +
                ": planar scenarios only allow rotations about z");
      }
      if (!s.graph.is_leader(i) && s.disturbance[i].z() != 0.0) {
        problem("disturbance.w" + std::to_string(i + 1) + ": planar scenarios require z = 0");
      }
    }
    if (s.v_star.z() != 0.0) problem("leaders.v_star: planar scenarios require z = 0");
  }

  // leader-leader edges cannot change length, so they must start at the goal
  for (int k = 0; k < m; ++k) {
    const Edge& e = s.graph.edges()[k];
    const double l = (agent_position(s.p0, e.head) - agent_position(s.p0, e.tail)).norm();
    if (!(l > kCoincidenceThreshold)) {
      problem("initial: agents " + std::to_string(e.head + 1) + " and " +
              std::to_string(e.tail + 1) + " coincide");
    } else if (!planar && s.params.rho > 0.0 && !(l > 2.0 * s.params.rho)) {
      problem("initial: balls of agents " + std::to_string(e.head + 1) + " and " +
              std::to_string(e.tail + 1) + " overlap");
    }
    if (s.graph.is_leader(e.head) && s.graph.is_leader(e.tail) &&
        std::abs(l - s.desired_distances[k]) > 1e-9) {
      problem("formation.distances: leader edge " + std::to_string(k + 1) +
              " differs from the leaders' actual separation");
    }
  }

  if (!out.empty() || !require_rigidity) return out;

  try {
    const Positions desired = desired_configuration(s);
    const auto check = is_infinitesimally_rigid(rigidity_matrix(desired, s.graph, s.params),
                                                s.params.dimension(), n);
    if (!check.rigid) {
      problem("desired formation is not infinitesimally elevation angle rigid (rank " +
              std::to_string(check.rank) + ", need " + std::to_string(check.required_rank) + ")");
    }
  } catch (const std::exception& e) {
    problem(e.what());
  }
  return out;
}

void validate(const Scenario& s) {
  auto problems = validation_problems(s);
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

}  // namespace ftiss
