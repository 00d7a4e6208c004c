#include "ftiss/analysis.hpp"

#include <cmath>
#include <sstream>

#include "ftiss/errors.hpp"

namespace ftiss {

Eigen::VectorXd formation_error(const Eigen::VectorXd& f, const Eigen::VectorXd& f_star) {
  if (f.size() != f_star.size()) {
    std::ostringstream os;
    os << "f has " << f.size() << " entries, f* has " << f_star.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return f - f_star;
}

LyapunovValues lyapunov(const Eigen::VectorXd& z, const Eigen::VectorXd& omega_tilde, double rho,
                        double ke) {
  LyapunovValues out;
  out.V1 = 0.5 * rho * z.squaredNorm();
  out.V = out.V1 + omega_tilde.squaredNorm() / (2.0 * ke);
  return out;
}

double smallest_positive_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() == 0) throw Error(ErrorCode::NoPositiveEigenvalue, "empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const double largest = ev(ev.size() - 1);
  if (!(largest > 0.0)) throw Error(ErrorCode::NoPositiveEigenvalue, "matrix is zero");
  const double cutoff = kEigenRelativeTolerance * largest;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > cutoff) return ev(k);
  }
  throw Error(ErrorCode::NoPositiveEigenvalue, "no eigenvalue above tolerance");
}

Eigen::MatrixXd follower_gram(const Eigen::MatrixXd& rigidity, const FormationGraph& graph) {
  // Mbar only keeps follower columns, so R Mbar R^T = R_f R_f^T.
  const int nl = graph.leader_count();
  const int nf = graph.follower_count();
  const auto follower_cols = rigidity.middleCols(3 * nl, 3 * nf);
  return follower_cols * follower_cols.transpose();
}

FtissConstants ftiss_constants(const Eigen::MatrixXd& rigidity, const FormationGraph& graph,
                               const ControlGains& gains, double rho) {
  if (graph.follower_count() == 0) {
    throw Error(ErrorCode::NoPositiveEigenvalue, "formation has no followers");
  }
  FtissConstants c;
  c.rho = rho;
  c.lambda_plus = smallest_positive_eigenvalue(follower_gram(rigidity, graph));

  const Eigen::MatrixXd hm = graph.incidence().cast<double>() * follower_selector(graph);
  c.hm_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(hm).singularValues()(0);

  const double a = gains.alpha;
  const double lam_pow = std::pow(c.lambda_plus, (1.0 + a) / 2.0);
  c.gate_coeff = gains.kp * std::pow(rho, 1.0 + a) * lam_pow / (2.0 * c.hm_norm);
  c.decay_coeff =
      std::pow(2.0, (a - 1.0) / 2.0) * gains.kp * std::pow(rho, (1.0 + a) / 2.0) * lam_pow;
  return c;
}

GateAndBound ftiss_gate_and_bound(const Eigen::VectorXd& z, const Eigen::VectorXd& omega_tilde,
                                  const FtissConstants& consts, double alpha) {
  GateAndBound out;
  out.gate = omega_tilde.norm() <= consts.gate_coeff * std::pow(z.norm(), alpha);
  const double v1 = 0.5 * consts.rho * z.squaredNorm();
  out.bound = -consts.decay_coeff * std::pow(v1, (1.0 + alpha) / 2.0);
  return out;
}

Eigen::VectorXd global_estimates(const Scenario& s, const Eigen::VectorXd& estimate_local) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(3 * s.agent_count());
  for (int i = s.graph.leader_count(); i < s.agent_count(); ++i) {
    out.segment<3>(3 * i) = direction_from_local(estimate_local.segment<3>(3 * i), s.frames[i]);
  }
  return out;
}

Eigen::VectorXd omega_tilde(const Scenario& s, const Eigen::VectorXd& estimate_local) {
  Eigen::VectorXd out = global_estimates(s, estimate_local);
  for (int i = s.graph.leader_count(); i < s.agent_count(); ++i) {
    out.segment<3>(3 * i) += s.v_star - s.disturbance_global(i);
  }
  return out;
}

Eigen::VectorXd numerical_derivative(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "t and v differ in length");
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  if (n < 2) return d;
  d(0) = (v[1] - v[0]) / (t[1] - t[0]);
  d(n - 1) = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
  for (Eigen::Index k = 1; k + 1 < n; ++k) d(k) = (v[k + 1] - v[k - 1]) / (t[k + 1] - t[k - 1]);
  return d;
}

std::optional<double> convergence_time(const TrajectoryLog& log, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const auto& s = log.samples;
  if (s.empty()) return std::nullopt;
  std::size_t first_inside = s.size();
  for (std::size_t k = s.size(); k-- > 0;) {
    if (!(s[k].z.norm() < eps)) break;
    first_inside = k;
  }
  if (first_inside == s.size()) return std::nullopt;
  return s[first_inside].t;
}

RigidityReport rigidity_report(const Scenario& s) {
  RigidityReport out;
  out.desired = desired_configuration(s);
  const Eigen::MatrixXd r = rigidity_matrix(out.desired, s.graph, s.params);
  const auto check = is_infinitesimally_rigid(r, s.params.dimension(), s.agent_count());
  out.rank = check.rank;
  out.required_rank = check.required_rank;
  out.rigid = check.rigid;
  out.singular_values = check.singular_values;
  try {
    out.lambda_plus = smallest_positive_eigenvalue(follower_gram(r, s.graph));
  } catch (const Error&) {
    out.lambda_plus = std::nullopt;
  }
  return out;
}

}  // namespace ftiss
