#include "ftiss/geometry.hpp"

#include <sstream>

#include "ftiss/errors.hpp"

namespace ftiss {

Mat3 validate_rotation(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols() || (q.rows() != 2 && q.rows() != 3)) {
    std::ostringstream os;
    os << "rotation must be 2x2 or 3x3, got " << q.rows() << "x" << q.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  Mat3 lifted = Mat3::Identity();
  lifted.topLeftCorner(q.rows(), q.cols()) = q;

  const double orth_err = (lifted.transpose() * lifted - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(orth_err <= kRotationTolerance)) {
    std::ostringstream os;
    os << "max |Q^T Q - I| = " << orth_err;
    throw Error(ErrorCode::NotOrthogonal, os.str());
  }
  const double det = lifted.determinant();
  if (std::abs(det - 1.0) > kRotationTolerance) {
    std::ostringstream os;
    os << "det(Q) = " << det;
    throw Error(ErrorCode::NotProperRotation, os.str());
  }
  return lifted;
}

Mat3 axis_angle_rotation(const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "rotation axis must be nonzero");
  return Eigen::AngleAxisd(angle, axis / norm).toRotationMatrix();
}

AgentFrame::AgentFrame(const Eigen::MatrixXd& rotation, const Vec3& translation)
    : rotation_(validate_rotation(rotation)), translation_(translation) {}

AgentFrame AgentFrame::from_axis_angle(double angle, const Vec3& axis, const Vec3& translation) {
  AgentFrame f(axis_angle_rotation(axis, angle), translation);
  f.has_axis_angle_ = true;
  f.angle_ = angle;
  f.axis_ = axis;
  return f;
}

double AgentFrame::angle() const {
  if (has_axis_angle_) return angle_;
  return Eigen::AngleAxisd(rotation_).angle();
}

Vec3 AgentFrame::axis() const {
  if (has_axis_angle_) return axis_;
  return Eigen::AngleAxisd(rotation_).axis();
}

Vec3 to_local(const Vec3& p_global, const AgentFrame& frame) {
  return frame.rotation().transpose() * (p_global + frame.translation());
}

Vec3 from_local(const Vec3& p_local, const AgentFrame& frame) {
  return frame.rotation() * p_local - frame.translation();
}

Vec3 bearing(const Vec3& p_i, const Vec3& p_j) {
  const Vec3 e = p_j - p_i;
  const double l = e.norm();
  if (!(l > kCoincidenceThreshold)) {
    std::ostringstream os;
    os << "agents " << l << " m apart";
    throw GeometryError(ErrorCode::CoincidentAgents, os.str());
  }
  return e / l;
}

}  // namespace ftiss
