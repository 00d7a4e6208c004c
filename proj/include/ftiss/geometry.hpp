#pragma once

#include <Eigen/Dense>

namespace ftiss {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Distances below this are treated as coincident agents.
inline constexpr double kCoincidenceThreshold = 1e-9;
inline constexpr double kRotationTolerance = 1e-12;

/// Checks that `q` (2x2 or 3x3) is a proper rotation and returns it lifted
/// to 3x3. A 2x2 rotation acts on the x-y block; z is left untouched.
Mat3 validate_rotation(const Eigen::MatrixXd& q);

/// Rotation of `angle` radians about `axis` (normalized internally).
Mat3 axis_angle_rotation(const Vec3& axis, double angle);

/// Fixed private frame of one agent. `rotation` maps local axes to global
/// axes; a point p (global) reads as rotation^T (p + translation) locally.
class AgentFrame {
 public:
  AgentFrame() = default;
  AgentFrame(const Eigen::MatrixXd& rotation, const Vec3& translation);

  static AgentFrame identity() { return AgentFrame(); }
  /// Rotation of `angle` radians about `axis`. The angle and axis are kept
  /// verbatim so the frame can be written back out exactly.
  static AgentFrame from_axis_angle(double angle, const Vec3& axis, const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  /// Angle (radians) and axis describing the rotation.
  double angle() const;
  Vec3 axis() const;

  friend bool operator==(const AgentFrame& a, const AgentFrame& b) {
    return a.rotation_ == b.rotation_ && a.translation_ == b.translation_;
  }

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
  bool has_axis_angle_ = false;
  double angle_ = 0.0;
  Vec3 axis_ = Vec3::UnitZ();
};

Vec3 to_local(const Vec3& p_global, const AgentFrame& frame);
Vec3 from_local(const Vec3& p_local, const AgentFrame& frame);

/// Rotates a free vector (bearing, velocity) between frames.
inline Vec3 direction_to_local(const Vec3& v_global, const AgentFrame& frame) {
  return frame.rotation().transpose() * v_global;
}
inline Vec3 direction_from_local(const Vec3& v_local, const AgentFrame& frame) {
  return frame.rotation() * v_local;
}

/// Unit vector from p_i toward p_j. Throws GeometryError(CoincidentAgents).
Vec3 bearing(const Vec3& p_i, const Vec3& p_j);

}  // namespace ftiss

namespace ftiss {

/// Stacked agent coordinates [p_1; ...; p_n], always 3 per agent.
using Positions = Eigen::VectorXd;

inline Vec3 agent_position(const Positions& p, int i) { return p.segment<3>(3 * i); }

}  // namespace ftiss
