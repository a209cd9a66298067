#pragma once

#include "stein/jet.hpp"
#include "stein/wirtinger.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace stein {

/// An evaluable smooth function on an open subset of C^n, usually a defining
/// function rho with Omega = {rho < 0}.
struct DefiningFunction {
  std::string name;
  int n = 0;  ///< complex dimension
  nlohmann::json params = nlohmann::json::object();
  std::string eval_region = "C^n";
  Field field;

  Jet2 jet(const Eigen::VectorXd& x) const;
  LeviData levi(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const;
};

/// rho(z) = sum_j |z_j|^2 - 1.
DefiningFunction make_ball(int n);

/// rho(z) = sum_j |z_j|^2 / a_j^2 - 1.
DefiningFunction make_ellipsoid(const std::vector<double>& axes);

/// rho(z) = sum_j |z_j|^(2 m_j) - 1 for positive integers m_j. Points with
/// some m_j > 1 and z_j = 0 are weakly pseudoconvex.
DefiningFunction make_complex_ellipsoid(const std::vector<int>& exponents);

/// Wraps a caller-supplied field.
DefiningFunction make_custom(std::string name, int n, Field field, nlohmann::json params = nlohmann::json::object());

/// rho * exp(psi). psi must be real valued and evaluable wherever rho is.
DefiningFunction weight(const DefiningFunction& rho, Field psi, const std::string& psi_name = "psi");

// ---------------------------------------------------------------------------
// Worm domain

/// Convex even bump phi for the worm domain.
///
/// phi(x) = c * g(|x| - (beta - pi/2)) where g(t) = 0 for t <= 0 and
/// g(t) = int_0^t int_0^s exp(-1/u) du ds otherwise, with c normalized so
/// that phi(a) = 2. The double integral has the closed form
///
///   g(t)  = (t^2/2 + t/2) exp(-1/t) - (t + 1/2) E1(1/t)
///   g'(t) = t exp(-1/t) - E1(1/t)
///   g''(t) = exp(-1/t)
struct WormProfile {
  double beta = 0.0;
  double a = 0.0;
  double c = 0.0;

  /// Half-width beta - pi/2 of the interval where phi vanishes.
  double flat_half_width() const;
};

/// Builds the profile for beta > pi/2. `a` defaults to (beta - pi/2) + 2.
WormProfile make_worm_profile(double beta);
WormProfile make_worm_profile(double beta, double a);

struct PhiValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

PhiValue worm_phi(double x, const WormProfile& profile);
Jet2 worm_phi(const Jet2& x, const WormProfile& profile);

/// The flat-start double integral g and its first two derivatives.
PhiValue flat_double_integral(double t);

/// rho(z, w) = |z - exp(i log|w|^2)|^2 - (1 - phi(log|w|^2)), defined for w != 0.
DefiningFunction make_worm(double beta, const WormProfile& profile);
DefiningFunction make_worm(double beta);

}  // namespace stein
