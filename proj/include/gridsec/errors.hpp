#pragma once

#include <stdexcept>
#include <string>

namespace gridsec {

/// Measurement set cannot pin down the full state vector (rank deficiency /
/// disconnected measurement graph).
struct UnobservableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_number)
      : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  explicit ParseError(const std::string& msg) : std::runtime_error(msg), line(-1) {}
  int line;
};

/// Exhaustive enumeration refused: instance too large for the 2^n budget.
struct OracleUnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DetectionUnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relaxation solver could not produce a factor within feasibility tolerance.
/// Never a proof of infeasibility.
struct SdpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Removing the planned bait edges would disconnect the measurement graph.
struct ObservabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gridsec
