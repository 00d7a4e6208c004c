#include "ftiss/controller.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "ftiss/errors.hpp"

namespace ftiss {

void validate(const ControlGains& gains) {
  std::vector<std::string> problems;
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  if (!(gains.kp > 0.0)) problems.push_back("kp must be positive (got " + fmt(gains.kp) + ")");
  if (!(gains.ke > 0.0)) problems.push_back("ke must be positive (got " + fmt(gains.ke) + ")");
  if (!(gains.alpha > 0.0 && gains.alpha < 1.0)) {
    problems.push_back("alpha must lie in (0,1) (got " + fmt(gains.alpha) + ")");
  }
  if (problems.empty()) return;
  std::string msg = problems.front();
  for (std::size_t k = 1; k < problems.size(); ++k) msg += "; " + problems[k];
  throw Error(ErrorCode::InvalidArgument, msg);
}

Vec3 weighted_bearing_error(LocalMeasurement meas) {
  if (meas.empty()) throw Error(ErrorCode::EmptyNeighborhood, "follower has no neighbors");
  Vec3 sum = Vec3::Zero();
  for (const auto& m : meas) sum += m.bearing * (m.f - m.f_star);
  return sum;
}

Vec3 control_input(LocalMeasurement meas, const Vec3& estimate, const ControlGains& gains) {
  return gains.kp * sig(weighted_bearing_error(meas), gains.alpha) - estimate;
}

Vec3 estimator_derivative(LocalMeasurement meas, const ControlGains& gains) {
  return -gains.ke * weighted_bearing_error(meas);
}

}  // namespace ftiss
