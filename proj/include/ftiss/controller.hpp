#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "ftiss/geometry.hpp"

namespace ftiss {

struct ControlGains {
  double kp = 0.5;
  double ke = 0.1;
  double alpha = 0.5;

  friend bool operator==(const ControlGains&, const ControlGains&) = default;
};

/// Throws Error(InvalidArgument) unless kp > 0, ke > 0 and 0 < alpha < 1.
void validate(const ControlGains& gains);

/// Componentwise sign(x_k) |x_k|^beta. sig(0) = 0.
template <typename Derived>
typename Derived::PlainObject sig(const Eigen::MatrixBase<Derived>& x, double beta) {
  return x.unaryExpr([beta](double v) {
    if (v > 0.0) return std::pow(v, beta);
    if (v < 0.0) return -std::pow(-v, beta);
    return 0.0;
  });
}

/// One neighbor as seen by a follower, all in the follower's own frame.
struct NeighborMeasurement {
  Vec3 bearing;
  double f;
  double f_star;
};

using LocalMeasurement = std::span<const NeighborMeasurement>;

/// sum_j g_ij (f_ij - f*_ij). Throws EmptyNeighborhood.
Vec3 weighted_bearing_error(LocalMeasurement meas);

/// u = kp sig(sum_j g_ij (f_ij - f*_ij))^alpha - w_hat, local frame.
Vec3 control_input(LocalMeasurement meas, const Vec3& estimate, const ControlGains& gains);

/// d/dt w_hat = -ke sum_j g_ij (f_ij - f*_ij), local frame.
Vec3 estimator_derivative(LocalMeasurement meas, const ControlGains& gains);

}  // namespace ftiss
