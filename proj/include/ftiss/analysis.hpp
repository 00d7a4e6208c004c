#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ftiss/controller.hpp"
#include "ftiss/elevation.hpp"
#include "ftiss/graph.hpp"
#include "ftiss/scenario.hpp"
#include "ftiss/trajectory.hpp"

namespace ftiss {

/// Eigenvalues below this fraction of the largest count as zero.
inline constexpr double kEigenRelativeTolerance = 1e-10;

/// z_e = f - f*. Throws DimensionMismatch.
Eigen::VectorXd formation_error(const Eigen::VectorXd& f, const Eigen::VectorXd& f_star);

struct LyapunovValues {
  double V1 = 0.0;
  double V = 0.0;
};

/// V1 = rho/2 |z|^2 and V = V1 + |omega_tilde|^2 / (2 ke).
LyapunovValues lyapunov(const Eigen::VectorXd& z, const Eigen::VectorXd& omega_tilde, double rho,
                        double ke);

/// Smallest eigenvalue of a symmetric PSD matrix that exceeds
/// kEigenRelativeTolerance times the largest. Throws NoPositiveEigenvalue.
double smallest_positive_eigenvalue(const Eigen::MatrixXd& sym);

struct FtissConstants {
  double rho = 0.0;
  double lambda_plus = 0.0;  // of R_E Mbar R_E^T
  double hm_norm = 0.0;      // spectral norm of Hbar Mbar
  double gate_coeff = 0.0;   // kp rho^(1+a) lambda^((1+a)/2) / (2 hm_norm)
  double decay_coeff = 0.0;  // 2^((a-1)/2) kp rho^((1+a)/2) lambda^((1+a)/2)
};

/// R_E Mbar R_E^T for the stacked 3n coordinates.
Eigen::MatrixXd follower_gram(const Eigen::MatrixXd& rigidity, const FormationGraph& graph);

FtissConstants ftiss_constants(const Eigen::MatrixXd& rigidity, const FormationGraph& graph,
                               const ControlGains& gains, double rho);

struct GateAndBound {
  bool gate = false;
  double bound = 0.0;
};

/// gate: |omega_tilde| <= gate_coeff |z|^alpha. bound: -decay_coeff V1^((1+alpha)/2),
/// the guaranteed rate of V1 while the gate holds.
GateAndBound ftiss_gate_and_bound(const Eigen::VectorXd& z, const Eigen::VectorXd& omega_tilde,
                                  const FtissConstants& consts, double alpha);

/// Global-frame estimate error over the stacked 3n coordinates, zero on
/// leaders: Q_i w_hat_i - omega_i, plus v* when the leaders move.
Eigen::VectorXd omega_tilde(const Scenario& scenario, const Eigen::VectorXd& estimate_local);

/// Follower estimates mapped to the global frame (leader blocks zero).
Eigen::VectorXd global_estimates(const Scenario& scenario, const Eigen::VectorXd& estimate_local);

/// dV/dt by centered differences on a sampled sequence, one-sided at the ends.
Eigen::VectorXd numerical_derivative(std::span<const double> t, std::span<const double> v);

/// First sample time after which |z_e| stays below eps; nullopt if never.
std::optional<double> convergence_time(const TrajectoryLog& log, double eps);

struct RigidityReport {
  int rank = 0;
  int required_rank = 0;
  bool rigid = false;
  /// nullopt when R_E Mbar R_E^T has no positive eigenvalue.
  std::optional<double> lambda_plus;
  Eigen::VectorXd singular_values;
  Positions desired;
};

/// Rank test and lambda+ at the desired configuration.
RigidityReport rigidity_report(const Scenario& scenario);

}  // namespace ftiss
