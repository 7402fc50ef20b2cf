#ifndef QLS_ERRORS_HPP
#define QLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qls {

// Error codes shared with the C API (see qls.h for the numeric mirror).
enum class ErrorCode : int {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  NotNormalized = 3,
  ZeroVector = 4,
  AsymmetricMatrix = 5,
  DegenerateContour = 6,
  TargetUnattainable = 7,
  ChartExit = 8,
  IdenticalConics = 9,
  DomainTooSmall = 10,
  NoInterface = 11,
  BadSpeed = 12,
  BadTime = 13,
  NotPositiveDefinite = 14,
  NegativeOccupation = 15,
  UnreachableTarget = 16,
  OffContour = 17,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Mapping a contour point outside the unit-sphere chart. Carries the
// offending ellipse parameter so callers can report it.
class ChartExitError : public Error {
 public:
  ChartExitError(double theta, const std::string& what)
      : Error(ErrorCode::ChartExit, what), theta_(theta) {}
  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

}  // namespace qls

#endif
