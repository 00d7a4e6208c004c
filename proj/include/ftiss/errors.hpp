#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftiss {

enum class ErrorCode {
  NotOrthogonal,
  NotProperRotation,
  CoincidentAgents,
  BallsOverlap,
  NonPositiveDistance,
  DegenerateAngle,
  DisconnectedGraph,
  UnknownVertex,
  InvalidGraph,
  EmptyNeighborhood,
  DimensionMismatch,
  NoPositiveEigenvalue,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Geometric degeneracy (coincident agents, overlapping balls, flat angles).
/// Carries the offending edge and, inside a simulation, the time.
class GeometryError : public Error {
 public:
  GeometryError(ErrorCode code, const std::string& what,
                std::optional<int> edge = std::nullopt,
                std::optional<double> time = std::nullopt);

  std::optional<int> edge() const noexcept { return edge_; }
  std::optional<double> time() const noexcept { return time_; }

  GeometryError with_edge(int edge) const;
  GeometryError with_time(double time) const;

 private:
  std::string detail_;
  std::optional<int> edge_;
  std::optional<double> time_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Scenario failed one or more invariants; all violations are listed.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace ftiss
