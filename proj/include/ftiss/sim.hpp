#pragma once

#include <Eigen/Dense>

#include "ftiss/scenario.hpp"
#include "ftiss/trajectory.hpp"

namespace ftiss {

/// State at t = 0: p0 and zero estimates.
SimState initial_state(const Scenario& scenario);

/// p_i(0) + t v* for leader i.
Vec3 leader_position(const Scenario& scenario, int i, double t);

struct FollowerRates {
  Vec3 velocity;       // local frame: u_i + omega_i
  Vec3 estimate_rate;  // local frame
};

/// Senses every neighbor through the local bearing chain, applies the
/// control law and adds the local disturbance.
FollowerRates follower_derivative(const SimState& state, int i, const Scenario& scenario);

/// Q_i^T v*, the leader velocity in its own frame.
Vec3 leader_derivative(int i, const Scenario& scenario);

/// Global-frame velocities of all agents (3n).
Eigen::VectorXd global_velocities(const SimState& state, const Scenario& scenario);

/// Advances one dt with the scenario's integrator; leaders are placed
/// analytically. Throws GeometryError with the stage time on any fault.
SimState step(const SimState& state, const Scenario& scenario);

/// omega_i - v*, global frame: where the follower's global estimate must
/// settle for its velocity to match the leaders.
Vec3 total_disturbance_target(const Scenario& scenario, int i);

/// Validates the scenario, integrates to t_end and logs every
/// sample_stride-th step together with the Lyapunov/FTISS quantities.
TrajectoryLog run(const Scenario& scenario);

/// Analysis columns for one state (used by run).
Sample make_sample(const SimState& state, const Scenario& scenario);

}  // namespace ftiss
