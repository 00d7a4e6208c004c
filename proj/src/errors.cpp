#include "ftiss/errors.hpp"

#include <sstream>

namespace ftiss {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotProperRotation: return "NotProperRotation";
    case ErrorCode::CoincidentAgents: return "CoincidentAgents";
    case ErrorCode::BallsOverlap: return "BallsOverlap";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoPositiveEigenvalue: return "NoPositiveEigenvalue";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

std::string describe(const std::string& what, std::optional<int> edge,
                     std::optional<double> time) {
  std::ostringstream os;
  os << what;
  if (edge) os << " (edge " << *edge + 1 << ")";
  if (time) os << " at t=" << *time;
  return os.str();
}

}  // namespace

GeometryError::GeometryError(ErrorCode code, const std::string& what, std::optional<int> edge,
                             std::optional<double> time)
    : Error(code, describe(what, edge, time)), detail_(what), edge_(edge), time_(time) {}

GeometryError GeometryError::with_edge(int edge) const {
  return GeometryError(code(), detail_, edge, time_);
}

GeometryError GeometryError::with_time(double time) const {
  return GeometryError(code(), detail_, edge_, time);
}

ParseError::ParseError(int line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + (field.empty() ? "" : " [" + field + "]") +
                         ": " + message),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "scenario validation failed:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace ftiss
