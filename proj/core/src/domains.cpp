#include "stein/domains.hpp"

#include "stein/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stein {
namespace {

void require_dimension(std::span<const Jet2> vars, int n, const std::string& name) {
  if (static_cast<int>(vars.size()) != 2 * n)
    throw std::invalid_argument(name + ": expected " + std::to_string(2 * n) + " real coordinates, got " +
                                std::to_string(vars.size()));
}

// E1(x) = -Ei(-x) for x > 0.
double exponential_integral_e1(double x) { return -std::expint(-x); }

}  // namespace

Jet2 DefiningFunction::jet(const Eigen::VectorXd& x) const { return evaluate_jet(field, x); }

LeviData DefiningFunction::levi(const Eigen::VectorXd& x) const { return complex_parts(jet(x)); }

double DefiningFunction::value(const Eigen::VectorXd& x) const { return evaluate_value(field, x); }

DefiningFunction make_ball(int n) {
  if (n < 1) throw std::invalid_argument("make_ball: n must be >= 1");
  DefiningFunction f;
  f.name = "ball";
  f.n = n;
  f.params = {{"n", n}};
  f.field = [n](std::span<const Jet2> v) {
    require_dimension(v, n, "ball");
    Jet2 s(-1.0);
    for (int j = 0; j < n; ++j) s += abs2(v[2 * j], v[2 * j + 1]);
    return s;
  };
  return f;
}

DefiningFunction make_ellipsoid(const std::vector<double>& axes) {
  if (axes.empty()) throw std::invalid_argument("make_ellipsoid: no axes");
  for (double a : axes)
    if (!(a > 0.0)) throw std::invalid_argument("make_ellipsoid: axes must be positive");
  const int n = static_cast<int>(axes.size());
  DefiningFunction f;
  f.name = "ellipsoid";
  f.n = n;
  f.params = {{"axes", axes}};
  f.field = [axes, n](std::span<const Jet2> v) {
    require_dimension(v, n, "ellipsoid");
    Jet2 s(-1.0);
    for (int j = 0; j < n; ++j) s += abs2(v[2 * j], v[2 * j + 1]) * Jet2(1.0 / (axes[j] * axes[j]));
    return s;
  };
  return f;
}

DefiningFunction make_complex_ellipsoid(const std::vector<int>& exponents) {
  if (exponents.empty()) throw std::invalid_argument("make_complex_ellipsoid: no exponents");
  for (int m : exponents)
    if (m < 1) throw std::invalid_argument("make_complex_ellipsoid: exponents must be >= 1");
  const int n = static_cast<int>(exponents.size());
  DefiningFunction f;
  f.name = "complex_ellipsoid";
  f.n = n;
  f.params = {{"exponents", exponents}};
  f.field = [exponents, n](std::span<const Jet2> v) {
    require_dimension(v, n, "complex_ellipsoid");
    Jet2 s(-1.0);
    for (int j = 0; j < n; ++j) s += pow(abs2(v[2 * j], v[2 * j + 1]), exponents[j]);
    return s;
  };
  return f;
}

DefiningFunction make_custom(std::string name, int n, Field field, nlohmann::json params) {
  if (n < 1 || 2 * n > kMaxVars) throw std::invalid_argument("make_custom: unsupported dimension");
  DefiningFunction f;
  f.name = std::move(name);
  f.n = n;
  f.params = std::move(params);
  f.field = std::move(field);
  return f;
}

DefiningFunction weight(const DefiningFunction& rho, Field psi, const std::string& psi_name) {
  DefiningFunction f;
  f.name = "weighted(" + rho.name + ")";
  f.n = rho.n;
  f.params = {{"base", rho.name}, {"base_params", rho.params}, {"psi", psi_name}};
  f.eval_region = rho.eval_region;
  f.field = [base = rho.field, psi = std::move(psi)](std::span<const Jet2> v) { return base(v) * exp(psi(v)); };
  return f;
}

// ---------------------------------------------------------------------------

double WormProfile::flat_half_width() const { return beta - std::numbers::pi / 2.0; }

PhiValue flat_double_integral(double t) {
  if (t <= 0.0) return {};
  const double inv = 1.0 / t;
  const double e = std::exp(-inv);
  const double e1 = exponential_integral_e1(inv);
  PhiValue g;
  g.d2 = e;
  // Both closed forms cancel badly for small t; g and g' are nonnegative.
  g.d1 = std::max(0.0, t * e - e1);
  g.value = std::max(0.0, (0.5 * t * t + 0.5 * t) * e - (t + 0.5) * e1);
  return g;
}

WormProfile make_worm_profile(double beta) { return make_worm_profile(beta, beta - std::numbers::pi / 2.0 + 2.0); }

WormProfile make_worm_profile(double beta, double a) {
  if (!(beta > std::numbers::pi / 2.0)) throw std::invalid_argument("worm profile: beta must exceed pi/2");
  const double half = beta - std::numbers::pi / 2.0;
  if (!(a > half)) throw std::invalid_argument("worm profile: a must exceed beta - pi/2");
  WormProfile p;
  p.beta = beta;
  p.a = a;
  p.c = 2.0 / flat_double_integral(a - half).value;
  return p;
}

PhiValue worm_phi(double x, const WormProfile& profile) {
  const double t = std::abs(x) - profile.flat_half_width();
  if (t <= 0.0) return {};
  const PhiValue g = flat_double_integral(t);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  return {profile.c * g.value, sign * profile.c * g.d1, profile.c * g.d2};
}

Jet2 worm_phi(const Jet2& x, const WormProfile& profile) {
  const PhiValue p = worm_phi(x.value(), profile);
  return chain(x, p.value, p.d1, p.d2);
}

DefiningFunction make_worm(double beta, const WormProfile& profile) {
  if (!(beta > std::numbers::pi / 2.0)) throw std::invalid_argument("make_worm: beta must exceed pi/2");
  DefiningFunction f;
  f.name = "worm";
  f.n = 2;
  f.params = {{"beta", beta}, {"a", profile.a}, {"c", profile.c}};
  f.eval_region = "C^2 minus {w = 0}";
  f.field = [profile](std::span<const Jet2> v) {
    require_dimension(v, 2, "worm");
    const Jet2 w2 = abs2(v[2], v[3]);
    if (w2.value() == 0.0) throw DomainError("log", "worm evaluated at w = 0");
    const Jet2 theta = log(w2);
    const Jet2 dx = v[0] - cos(theta);
    const Jet2 dy = v[1] - sin(theta);
    return abs2(dx, dy) - Jet2(1.0) + worm_phi(theta, profile);
  };
  return f;
}

DefiningFunction make_worm(double beta) { return make_worm(beta, make_worm_profile(beta)); }

}  // namespace stein
