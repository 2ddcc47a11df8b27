#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lwf {

enum class ErrorKind {
  NotPositiveDefinite,
  SingularMap,
  DimensionMismatch,
  DivergentIntegral,
  DimensionCap,
  NonFinite,
  NoConvergence,
  BoundaryTooClose,
  UnsupportedOrder,
  UnsupportedInteraction,
  IterateLeftCone,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `residual()` carries the best residual
/// reached for NoConvergence / IterateLeftCone, NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        residual_(residual) {}

  ErrorKind kind() const noexcept { return kind_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

inline void require_dim(int expected, int actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(expected) +
                    ", got " + std::to_string(actual));
  }
}

}  // namespace lwf
