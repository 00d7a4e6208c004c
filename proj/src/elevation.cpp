#include "ftiss/elevation.hpp"

#include <cmath>
#include <sstream>

#include "ftiss/errors.hpp"

namespace ftiss {

void validate(const ElevationParams& params) {
  if (!(params.rho > 0.0) || !std::isfinite(params.rho)) {
    std::ostringstream os;
    os << "rho must be positive, got " << params.rho;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

double elevation_f_2d_from_distance(double l, double h_c) {
  if (!(l > 0.0)) throw GeometryError(ErrorCode::NonPositiveDistance, "distance must be positive");
  if (!(h_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "rod height must be positive");
  return l / h_c;
}

double elevation_f_2d_from_bearings(const Vec3& g_base, const Vec3& g_tip) {
  const double c = g_base.dot(g_tip);
  if (!(std::abs(c) < 1.0 - kDegenerateAngleTolerance)) {
    std::ostringstream os;
    os << "rod bearings inner product " << c;
    throw GeometryError(ErrorCode::DegenerateAngle, os.str());
  }
  // sin from the cross product keeps precision when c is close to +-1.
  return c / g_base.cross(g_tip).norm();
}

double elevation_f_3d_from_distance(double l, double r_c) {
  if (!(l > 0.0)) throw GeometryError(ErrorCode::NonPositiveDistance, "distance must be positive");
  if (!(r_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  return l / r_c;
}

std::pair<Vec3, Vec3> tangent_points_3d(const Vec3& p_i, const Vec3& p_j, double r_c) {
  if (!(r_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  const Vec3 e = p_j - p_i;
  const double l = e.norm();
  if (!(l > 2.0 * r_c)) {
    std::ostringstream os;
    os << "centers " << l << " m apart with radius " << r_c;
    throw GeometryError(ErrorCode::BallsOverlap, os.str());
  }
  const Vec3 u = e / l;

  Vec3 w = Vec3::UnitZ() - u.z() * u;
  if (w.norm() < kTangentPlaneParallelTolerance) w = Vec3::UnitX() - u.x() * u;
  w.normalize();

  const double sin_half = r_c / l;
  const double cos_half = std::sqrt(1.0 - sin_half * sin_half);
  const double reach = l * cos_half;  // tangent segment length
  return {p_i + reach * (cos_half * u + sin_half * w), p_i + reach * (cos_half * u - sin_half * w)};
}

std::pair<Vec3, Vec3> tangent_bearings_3d(const Vec3& p_i, const Vec3& p_j, double r_c) {
  const auto [t1, t2] = tangent_points_3d(p_i, p_j, r_c);
  return {bearing(p_i, t1), bearing(p_i, t2)};
}

double elevation_f_3d_from_bearings(const Vec3& g1, const Vec3& g2) {
  const double c = g1.dot(g2);
  if (!(c < 1.0 - kDegenerateAngleTolerance)) {
    std::ostringstream os;
    os << "tangent bearings inner product " << c;
    throw GeometryError(ErrorCode::DegenerateAngle, os.str());
  }
  // (1 - c) / 2 = |g1 - g2|^2 / 4 for unit vectors; the chord form avoids
  // cancellation for distant neighbors.
  return 2.0 / (g1 - g2).norm();
}

NeighborSensing sense_neighbor(const Vec3& p_i, const Vec3& p_j, const AgentFrame& observer,
                               const ElevationParams& params) {
  const Vec3 self = to_local(p_i, observer);
  const Vec3 g = bearing(self, to_local(p_j, observer));

  if (params.mode == ElevationMode::Planar2D) {
    const Vec3 tip = p_j + Vec3(0.0, 0.0, params.rho);
    const Vec3 g_tip = bearing(self, to_local(tip, observer));
    return {g, elevation_f_2d_from_bearings(g, g_tip)};
  }
  const auto [t1, t2] = tangent_points_3d(p_i, p_j, params.rho);
  const Vec3 g1 = bearing(self, to_local(t1, observer));
  const Vec3 g2 = bearing(self, to_local(t2, observer));
  return {g, elevation_f_3d_from_bearings(g1, g2)};
}

Eigen::VectorXd elevation_function(const Positions& p, const FormationGraph& graph,
                                   const ElevationParams& params) {
  if (p.size() != 3 * graph.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "position vector must have 3n entries");
  }
  Eigen::VectorXd f(graph.edge_count());
  const AgentFrame global;
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edges()[k];
    try {
      f(k) = sense_neighbor(agent_position(p, e.head), agent_position(p, e.tail), global, params).f;
    } catch (const GeometryError& err) {
      throw err.with_edge(k);
    }
  }
  return f;
}

Eigen::MatrixXd rigidity_matrix(const Positions& p, const FormationGraph& graph,
                                const ElevationParams& params) {
  if (p.size() != 3 * graph.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "position vector must have 3n entries");
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(graph.edge_count(), 3 * graph.vertex_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edges()[k];
    const Vec3 head = agent_position(p, e.head);
    const Vec3 tail = agent_position(p, e.tail);
    Vec3 g;
    try {
      g = bearing(tail, head);
      if (params.mode == ElevationMode::Spatial3D && !((head - tail).norm() > 2.0 * params.rho)) {
        throw GeometryError(ErrorCode::BallsOverlap, "balls overlap");
      }
    } catch (const GeometryError& err) {
      throw err.with_edge(k);
    }
    r.block<1, 3>(k, 3 * e.head) = g.transpose() / params.rho;
    r.block<1, 3>(k, 3 * e.tail) = -g.transpose() / params.rho;
  }
  return r;
}

RigidityCheck is_infinitesimally_rigid(const Eigen::MatrixXd& rigidity, int dimension,
                                       int agent_count) {
  RigidityCheck out;
  out.required_rank = dimension * agent_count - dimension * (dimension + 1) / 2;
  if (rigidity.size() == 0) return out;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rigidity);
  out.singular_values = svd.singularValues();
  const double sigma_max = out.singular_values(0);
  out.threshold = kRankRelativeTolerance * sigma_max;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    const double s = out.singular_values(k);
    if (s > out.threshold) {
      ++out.rank;
      out.smallest_kept = s;
    } else if (out.largest_dropped == 0.0) {
      out.largest_dropped = s;
    }
  }
  out.rigid = out.rank == out.required_rank;
  return out;
}

}  // namespace ftiss
