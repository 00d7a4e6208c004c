#pragma once

#include <utility>

#include <Eigen/Dense>

#include "ftiss/geometry.hpp"
#include "ftiss/graph.hpp"

namespace ftiss {

/// Planar: each agent carries a vertical rod of height rho (2D formation
/// embedded at z = 0). Spatial: each agent is a ball of radius rho.
enum class ElevationMode { Planar2D, Spatial3D };

struct ElevationParams {
  ElevationMode mode = ElevationMode::Spatial3D;
  double rho = 1.0;

  int dimension() const { return mode == ElevationMode::Planar2D ? 2 : 3; }

  friend bool operator==(const ElevationParams&, const ElevationParams&) = default;
};

void validate(const ElevationParams& params);

inline constexpr double kDegenerateAngleTolerance = 1e-12;
inline constexpr double kTangentPlaneParallelTolerance = 1e-8;
inline constexpr double kRankRelativeTolerance = 1e-8;

/// cot of the rod elevation angle, l / h_c.
double elevation_f_2d_from_distance(double l, double h_c);

/// cot of the angle between the bearings to a neighbor's base and to its rod
/// tip, c / sqrt(1 - c^2). Both bearings must be in the same frame.
double elevation_f_2d_from_bearings(const Vec3& g_base, const Vec3& g_tip);

/// cosec of half the ball elevation angle, l / r_c.
double elevation_f_3d_from_distance(double l, double r_c);

/// Tangent points j', j'' on the ball of radius r_c about p_j as seen from
/// p_i. They lie in the plane through e_ij and the global z axis (x axis when
/// e_ij is parallel to z). Throws BallsOverlap when |p_j - p_i| <= 2 r_c.
std::pair<Vec3, Vec3> tangent_points_3d(const Vec3& p_i, const Vec3& p_j, double r_c);
std::pair<Vec3, Vec3> tangent_bearings_3d(const Vec3& p_i, const Vec3& p_j, double r_c);

/// 1 / sqrt((1 - c) / 2) for c the inner product of the two tangent bearings.
double elevation_f_3d_from_bearings(const Vec3& g1, const Vec3& g2);

/// What agent i senses about neighbor j in its own frame.
struct NeighborSensing {
  Vec3 bearing;  // local frame of the observer
  double f;
};

/// Runs the bearing-only sensing chain: builds the rod tip or tangent
/// points, maps everything into `observer`'s frame, and evaluates f from the
/// local bearings alone.
NeighborSensing sense_neighbor(const Vec3& p_i, const Vec3& p_j, const AgentFrame& observer,
                               const ElevationParams& params);

/// f_E(p) in edge order, measured by each edge's head through the bearing
/// chain. Geometry errors carry the edge index.
Eigen::VectorXd elevation_function(const Positions& p, const FormationGraph& graph,
                                   const ElevationParams& params);

/// R_E = diag(g_k^T / rho) (H (x) I_3), m x 3n, with g_k the unit vector
/// from the tail to the head of edge k.
Eigen::MatrixXd rigidity_matrix(const Positions& p, const FormationGraph& graph,
                                const ElevationParams& params);

struct RigidityCheck {
  bool rigid = false;
  int rank = 0;
  int required_rank = 0;
  double threshold = 0.0;
  /// Smallest singular value counted in the rank, and the largest dropped
  /// (0 when none is dropped).
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
  Eigen::VectorXd singular_values;
};

/// Numerical rank test against d n - d (d + 1) / 2. Singular values below
/// kRankRelativeTolerance * sigma_max count as zero.
RigidityCheck is_infinitesimally_rigid(const Eigen::MatrixXd& rigidity, int dimension,
                                       int agent_count);

}  // namespace ftiss
