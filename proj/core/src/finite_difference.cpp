#include "stein/finite_difference.hpp"

#include "stein/errors.hpp"

#include <cmath>
#include <string>

namespace stein {

DirectionalDerivative normal_third_derivative(const std::function<double(const Eigen::VectorXd&)>& field,
                                              const Eigen::VectorXd& p, const Eigen::VectorXd& direction,
                                              const RichardsonOptions& options) {
  const double h = options.step;
  const auto central = [&](double step) {
    const double fp = field(p + step * direction);
    const double fm = field(p - step * direction);
    return (fp - fm) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;

  DirectionalDerivative out{extrapolated, std::abs(extrapolated - fine)};
  if (!(out.error_indicator <= options.tolerance)) {
    throw AccuracyError("normal_third_derivative: error indicator " + std::to_string(out.error_indicator) +
                            " exceeds tolerance " + std::to_string(options.tolerance),
                        out.error_indicator);
  }
  return out;
}

}  // namespace stein
