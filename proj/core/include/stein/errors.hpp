#pragma once

#include <stdexcept>
#include <string>

namespace stein {

/// Evaluation left the region where a primitive is defined (log of a
/// nonpositive number, division by zero, a point with w = 0 on the worm, ...).
class DomainError : public std::domain_error {
 public:
  DomainError(std::string primitive, const std::string& detail)
      : std::domain_error(primitive + ": " + detail), primitive_(std::move(primitive)) {}

  const std::string& primitive() const noexcept { return primitive_; }

 private:
  std::string primitive_;
};

/// An iterative procedure (Newton projection, bisection) did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite-difference estimate whose Richardson error indicator exceeded
/// the caller's tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double indicator)
      : std::runtime_error(what), indicator_(indicator) {}

  double indicator() const noexcept { return indicator_; }

 private:
  double indicator_;
};

/// Pole of a closed-form Riccati solution, or an integrated trajectory that
/// blew up across one.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// eta2 at or below the worm threshold pi / (2 (pi - beta)).
class ThresholdError : public std::invalid_argument {
 public:
  ThresholdError(const std::string& what, double threshold)
      : std::invalid_argument(what), threshold_(threshold) {}

  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// The convexification could not find constants satisfying one of its
/// separation inequalities.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stein
