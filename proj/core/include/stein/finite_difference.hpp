#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>

namespace stein {

struct DirectionalDerivative {
  double derivative = 0.0;
  /// |R - D(h/2)|: distance between the extrapolated value and the finer
  /// central difference.
  double error_indicator = 0.0;
};

struct RichardsonOptions {
  double step = 1e-3;
  /// AccuracyError when the indicator exceeds this.
  double tolerance = std::numeric_limits<double>::infinity();
};

/// Derivative of `field` at `p` along `direction` by central differences at
/// steps h and h/2 combined with one Richardson step (4 D(h/2) - D(h)) / 3.
///
/// Used for the single third-order quantity the toolkit needs: the normal
/// derivative of a Levi form value evaluated by automatic differentiation.
DirectionalDerivative normal_third_derivative(const std::function<double(const Eigen::VectorXd&)>& field,
                                              const Eigen::VectorXd& p, const Eigen::VectorXd& direction,
                                              const RichardsonOptions& options = {});

}  // namespace stein
