#include "stein/riccati.hpp"

#include "stein/csv.hpp"
#include "stein/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stein {
namespace {

constexpr double kPoleGuard = 1e-12;
constexpr double kBlowUp = 1e9;

void require_coefficients(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("riccati: need a > 0 and b > 0");
}

double cot_argument(double a, double b, double phi, double t) {
  require_coefficients(a, b);
  if (!(t > 0.0)) throw DomainError("log", "riccati: t must be positive");
  const double arg = std::sqrt(a * b) * std::log(t) + phi;
  if (std::abs(std::sin(arg)) < kPoleGuard)
    throw SingularityError("riccati_closed_form: pole of cot at t = " + std::to_string(t));
  return arg;
}

}  // namespace

double riccati_closed_form(double a, double b, double phi, double t) {
  const double arg = cot_argument(a, b, phi, t);
  return -std::sqrt(b / a) * std::cos(arg) / std::sin(arg) / t;
}

Jet2 riccati_closed_form(double a, double b, double phi, const Jet2& t) {
  cot_argument(a, b, phi, t.value());
  const Jet2 arg = std::sqrt(a * b) * log(t) + Jet2(phi);
  return Jet2(-std::sqrt(b / a)) * cot(arg) / t;
}

double riccati_rhs(double a, double b, double t, double s) { return a * s * s - s / t + b / (t * t); }

double riccati_phase(double a, double b, double t0, double s0) {
  require_coefficients(a, b);
  if (!(t0 > 0.0)) throw DomainError("log", "riccati: t0 must be positive");
  // cot(arg) = -s0 t0 sqrt(a/b), with arg taken in (0, pi).
  const double arg = std::atan2(1.0, -s0 * t0 * std::sqrt(a / b));
  return arg - std::sqrt(a * b) * std::log(t0);
}

std::vector<RiccatiPoint> riccati_integrate(double a, double b, double t0, double s0, double t_end, double step) {
  require_coefficients(a, b);
  if (!(t0 > 0.0) || !(t_end > 0.0)) throw DomainError("log", "riccati: t must stay positive");
  if (!(step > 0.0)) throw std::invalid_argument("riccati_integrate: step must be positive");
  std::vector<RiccatiPoint> out{{t0, s0}};
  const double span = t_end - t0;
  if (span == 0.0) return out;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / step - 1e-9));
  const double h_nominal = span > 0.0 ? step : -step;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  double t = t0;
  double s = s0;
  auto f = [a, b](double tt, double ss) { return riccati_rhs(a, b, tt, ss); };
  for (long k = 0; k < steps; ++k) {
    const double h = k + 1 == steps ? t_end - t : h_nominal;
    const double k1 = f(t, s);
    const double k2 = f(t + h / 2, s + h / 2 * k1);
    const double k3 = f(t + h / 2, s + h / 2 * k2);
    const double k4 = f(t + h, s + h * k3);
    s += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = k + 1 == steps ? t_end : t + h;
    if (!std::isfinite(s) || std::abs(s) > kBlowUp)
      throw SingularityError("riccati_integrate: solution blew up near t = " + std::to_string(t));
    out.push_back({t, s});
  }
  return out;
}

RiccatiCheck riccati_check(double a, double b, double phi, double t0, double t1, double step, int residual_points) {
  RiccatiCheck c{a, b, phi, t0, t1, step, 0.0, 0.0, {}};
  c.trajectory = riccati_integrate(a, b, t0, riccati_closed_form(a, b, phi, t0), t1, step);
  for (const auto& p : c.trajectory)
    c.sup_error = std::max(c.sup_error, std::abs(p.s - riccati_closed_form(a, b, phi, p.t)));
  for (int k = 0; k < residual_points; ++k) {
    const double t = residual_points == 1 ? t0 : t0 + (t1 - t0) * k / (residual_points - 1);
    const Jet2 s = riccati_closed_form(a, b, phi, Jet2::variable(t, 0, 1));
    c.ode_residual = std::max(c.ode_residual, std::abs(s.grad()(0) - riccati_rhs(a, b, t, s.value())));
  }
  return c;
}

nlohmann::json to_json(const RiccatiCheck& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"phi", c.phi},
          {"t0", c.t0},
          {"t1", c.t1},
          {"step", c.step},
          {"steps", c.trajectory.size() - 1},
          {"s_end", c.trajectory.back().s},
          {"sup_error", c.sup_error},
          {"ode_residual", c.ode_residual}};
}

void write_trajectory_csv(std::ostream& out, const RiccatiCheck& c) {
  out << "t,s,closed_form\n";
  for (const auto& p : c.trajectory)
    out << csv_number(p.t) << "," << csv_number(p.s) << "," << csv_number(riccati_closed_form(c.a, c.b, c.phi, p.t))
        << "\n";
}

}  // namespace stein
