#pragma once

// The Riccati equation s' = a s^2 - s/t + b/t^2 on t > 0, whose solutions are
//
//   s(t) = -sqrt(b/a) cot(sqrt(ab) log t + phi) / t.

#include "stein/jet.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <vector>

namespace stein {

/// Closed-form solution with phase phi. Throws SingularityError within 1e-12
/// of a pole of cot.
double riccati_closed_form(double a, double b, double phi, double t);
/// Same, differentiable in t.
Jet2 riccati_closed_form(double a, double b, double phi, const Jet2& t);

/// The right-hand side a s^2 - s/t + b/t^2.
double riccati_rhs(double a, double b, double t, double s);

/// The phase phi of the closed-form solution through (t0, s0), in
/// (-sqrt(ab) log t0, pi - sqrt(ab) log t0).
double riccati_phase(double a, double b, double t0, double s0);

struct RiccatiPoint {
  double t = 0.0;
  double s = 0.0;
};

/// Fixed-step RK4 from (t0, s0) to t_end; the last step is shortened to land
/// on t_end. Either direction is allowed. Throws SingularityError once
/// |s| > 1e9.
std::vector<RiccatiPoint> riccati_integrate(double a, double b, double t0, double s0, double t_end,
                                            double step = 1e-3);

struct RiccatiCheck {
  double a = 0.0;
  double b = 0.0;
  double phi = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double step = 0.0;
  double sup_error = 0.0;     ///< max |RK4 - closed form| along the trajectory
  double ode_residual = 0.0;  ///< max |s' - rhs| of the closed form at `residual_points` radii
  std::vector<RiccatiPoint> trajectory;
};

/// Integrates from the closed-form value at t0 and compares with the closed
/// form, and checks the closed form against the equation with s' by AD.
RiccatiCheck riccati_check(double a, double b, double phi, double t0, double t1, double step = 1e-3,
                           int residual_points = 50);

nlohmann::json to_json(const RiccatiCheck& check);

/// t,s,closed_form
void write_trajectory_csv(std::ostream& out, const RiccatiCheck& check);

}  // namespace stein
