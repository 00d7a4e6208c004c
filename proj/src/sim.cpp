#include "ftiss/sim.hpp"

#include <limits>
#include <vector>

#include "ftiss/analysis.hpp"
#include "ftiss/controller.hpp"
#include "ftiss/elevation.hpp"
#include "ftiss/errors.hpp"

namespace ftiss {

namespace {

struct Rates {
  Eigen::VectorXd p;         // global
  Eigen::VectorXd estimate;  // local
};

FollowerRates follower_rates(const Positions& p, const Eigen::VectorXd& estimate, int i,
                             const Scenario& s, const Eigen::VectorXd& f_star) {
  const Vec3 p_i = agent_position(p, i);
  std::vector<NeighborMeasurement> meas;
  meas.reserve(s.graph.incident(i).size());
  for (const auto& nb : s.graph.incident(i)) {
    try {
      const auto sensed = sense_neighbor(p_i, agent_position(p, nb.vertex), s.frames[i], s.params);
      meas.push_back({sensed.bearing, sensed.f, f_star(nb.edge)});
    } catch (const GeometryError& err) {
      throw err.with_edge(nb.edge);
    }
  }
  const Vec3 est = estimate.segment<3>(3 * i);
  return {control_input(meas, est, s.gains) + s.disturbance_local(i),
          estimator_derivative(meas, s.gains)};
}

Rates evaluate(const Positions& p, const Eigen::VectorXd& estimate, const Scenario& s,
               const Eigen::VectorXd& f_star) {
  const int n = s.agent_count();
  Rates r{Eigen::VectorXd::Zero(3 * n), Eigen::VectorXd::Zero(3 * n)};
  for (int i = 0; i < s.graph.leader_count(); ++i) r.p.segment<3>(3 * i) = s.v_star;
  for (int i = s.graph.leader_count(); i < n; ++i) {
    const auto fr = follower_rates(p, estimate, i, s, f_star);
    r.p.segment<3>(3 * i) = direction_from_local(fr.velocity, s.frames[i]);
    r.estimate.segment<3>(3 * i) = fr.estimate_rate;
  }
  return r;
}

void place_leaders(Positions& p, const Scenario& s, double t) {
  for (int i = 0; i < s.graph.leader_count(); ++i) p.segment<3>(3 * i) = leader_position(s, i, t);
}

}  // namespace

SimState initial_state(const Scenario& s) {
  return SimState{0, 0.0, s.p0, Eigen::VectorXd::Zero(3 * s.agent_count())};
}

Vec3 leader_position(const Scenario& s, int i, double t) {
  return agent_position(s.p0, i) + t * s.v_star;
}

FollowerRates follower_derivative(const SimState& state, int i, const Scenario& s) {
  if (s.graph.is_leader(i) || i >= s.agent_count()) {
    throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(i + 1) + " is not a follower");
  }
  return follower_rates(state.p, state.estimate, i, s, s.f_star());
}

Vec3 leader_derivative(int i, const Scenario& s) {
  if (!s.graph.is_leader(i)) {
    throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(i + 1) + " is not a leader");
  }
  return direction_to_local(s.v_star, s.frames[i]);
}

Eigen::VectorXd global_velocities(const SimState& state, const Scenario& s) {
  return evaluate(state.p, state.estimate, s, s.f_star()).p;
}

SimState step(const SimState& state, const Scenario& s) {
  const Eigen::VectorXd f_star = s.f_star();
  const double t0 = state.t;
  const double dt = s.dt;
  SimState next;
  next.step = state.step + 1;
  next.t = static_cast<double>(next.step) * dt;

  double stage_time = t0;
  try {
    if (s.integrator == Integrator::Euler) {
      const Rates k1 = evaluate(state.p, state.estimate, s, f_star);
      next.p = state.p + dt * k1.p;
      next.estimate = state.estimate + dt * k1.estimate;
    } else {
      auto stage = [&](const Rates& k, double c) {
        stage_time = t0 + c * dt;
        Positions p = state.p + (c * dt) * k.p;
        place_leaders(p, s, stage_time);
        const Eigen::VectorXd est = state.estimate + (c * dt) * k.estimate;
        return evaluate(p, est, s, f_star);
      };
      const Rates k1 = evaluate(state.p, state.estimate, s, f_star);
      const Rates k2 = stage(k1, 0.5);
      const Rates k3 = stage(k2, 0.5);
      const Rates k4 = stage(k3, 1.0);
      next.p = state.p + (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
      next.estimate = state.estimate +
                      (dt / 6.0) * (k1.estimate + 2.0 * k2.estimate + 2.0 * k3.estimate + k4.estimate);
    }
  } catch (const GeometryError& err) {
    throw err.with_time(stage_time);
  }
  place_leaders(next.p, s, next.t);
  return next;
}

Vec3 total_disturbance_target(const Scenario& s, int i) {
  return s.disturbance_global(i) - s.v_star;
}

Sample make_sample(const SimState& state, const Scenario& s) {
  Sample out;
  out.t = state.t;
  out.p = state.p;
  out.estimate = state.estimate;
  out.z = formation_error(elevation_function(state.p, s.graph, s.params), s.f_star());
  const Eigen::VectorXd wt = omega_tilde(s, state.estimate);
  const auto lv = lyapunov(out.z, wt, s.params.rho, s.gains.ke);
  out.V1 = lv.V1;
  out.V = lv.V;
  try {
    const auto consts =
        ftiss_constants(rigidity_matrix(state.p, s.graph, s.params), s.graph, s.gains, s.params.rho);
    const auto gb = ftiss_gate_and_bound(out.z, wt, consts, s.gains.alpha);
    out.gate = gb.gate;
    out.bound = gb.bound;
  } catch (const Error&) {
    out.gate = false;
    out.bound = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

TrajectoryLog run(const Scenario& s) {
  validate(s);
  TrajectoryLog log;
  log.agent_count = s.agent_count();
  log.edge_count = s.graph.edge_count();

  const long long steps = s.step_count();
  log.samples.reserve(static_cast<std::size_t>(steps / s.sample_stride + 1));
  SimState state = initial_state(s);
  log.samples.push_back(make_sample(state, s));
  for (long long k = 1; k <= steps; ++k) {
    state = step(state, s);
    if (k % s.sample_stride == 0) {
      try {
        log.samples.push_back(make_sample(state, s));
      } catch (const GeometryError& err) {
        throw err.with_time(state.t);
      }
    }
  }
  return log;
}

}  // namespace ftiss
