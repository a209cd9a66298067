#include "doctest.h"
#include "oracles.hpp"

#include "stein/domains.hpp"
#include "stein/errors.hpp"
#include "stein/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace stein;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd pt(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x(i++) = c;
  return x;
}

// g(t) = int_0^t (t - u) exp(-1/u) du, the flat double integral by quadrature.
double g_quadrature(double t) {
  return oracle::simpson([t](double u) { return u <= 0.0 ? 0.0 : (t - u) * std::exp(-1.0 / u); }, 0.0, t, 4000);
}

// A boundary point of the worm: z on the circle of radius sqrt(1 - phi(s)) about e^{is}, log|w|^2 = s.
Eigen::VectorXd worm_boundary_point(const WormProfile& prof, double s, double alpha, double arg_w) {
  const double R = std::sqrt(1.0 - worm_phi(s, prof).value);
  const double r = std::exp(s / 2.0);
  return pt({std::cos(s) + R * std::cos(alpha), std::sin(s) + R * std::sin(alpha), r * std::cos(arg_w),
             r * std::sin(arg_w)});
}

}  // namespace

TEST_CASE("ball and ellipsoid examples") {
  const auto ball = make_ball(2);
  const LeviData d = ball.levi(pt({1, 0, 0, 0}));
  CHECK(d.value == 0.0);
  CHECK(std::abs(d.holo_grad(0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(d.holo_grad(1)) < 1e-15);
  const LeviData o = ball.levi(pt({0, 0, 0, 0}));
  CHECK(o.value == -1.0);
  CHECK(o.mixed_hess.isApprox(Eigen::MatrixXcd::Identity(2, 2), 1e-15));

  CHECK(make_ellipsoid({2.0, 1.0}).value(pt({2, 0, 0, 0})) == 0.0);
  CHECK_THROWS_AS(make_ellipsoid({2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_ellipsoid({-1.0}), std::invalid_argument);
}

TEST_CASE("flat double integral matches quadrature") {
  for (double t : {0.1, 0.3, 0.7, 1.0, 2.0, 3.5}) {
    const double q = g_quadrature(t);
    CHECK(flat_double_integral(t).value == doctest::Approx(q).epsilon(1e-9));
    const double q1 = oracle::simpson([](double u) { return u <= 0.0 ? 0.0 : std::exp(-1.0 / u); }, 0.0, t, 4000);
    CHECK(flat_double_integral(t).d1 == doctest::Approx(q1).epsilon(1e-9));
    CHECK(flat_double_integral(t).d2 == doctest::Approx(std::exp(-1.0 / t)));
  }
  CHECK(flat_double_integral(0.0).value == 0.0);
  CHECK(flat_double_integral(-1.0).d2 == 0.0);
}

TEST_CASE("worm_phi examples") {
  for (double beta : {0.6 * kPi, 0.75 * kPi, 1.2 * kPi}) {
    const WormProfile prof = make_worm_profile(beta);
    const double half = beta - kPi / 2.0;
    CHECK(worm_phi(0.0, prof).value == 0.0);
    CHECK(worm_phi(half, prof).value == 0.0);
    CHECK(worm_phi(half, prof).d1 == 0.0);
    // phi(a) = 2 with c fixed by quadrature of g.
    const double c_oracle = 2.0 / g_quadrature(prof.a - half);
    CHECK(prof.c == doctest::Approx(c_oracle).epsilon(1e-9));
    CHECK(worm_phi(prof.a, prof).value == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("worm_phi profile properties on a grid") {
  for (double beta : {0.6 * kPi, 1.2 * kPi}) {
    const WormProfile prof = make_worm_profile(beta);
    const double half = prof.flat_half_width();
    const double lim = prof.a + 2.0;
    for (double x = -lim; x <= lim; x += 0.01) {
      const PhiValue p = worm_phi(x, prof);
      CHECK(p.value >= 0.0);
      CHECK(p.d2 >= 0.0);
      CHECK(std::abs(p.value - worm_phi(-x, prof).value) <= 1e-12);
      if (std::abs(x) <= half) CHECK(p.value == 0.0);
      if (std::abs(x) >= half + 0.01) CHECK(p.value > 0.0);
      if (std::abs(x) > prof.a) CHECK(p.value > 1.0);
    }
    // Crossing phi = 1 by bisection on (half, a).
    double lo = half, hi = prof.a;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (worm_phi(mid, prof).value < 1.0 ? lo : hi) = mid;
    }
    CHECK(worm_phi(lo, prof).d1 > 1e-3);
  }
}

TEST_CASE("worm examples") {
  const double beta = 0.6 * kPi;
  const auto worm = make_worm(beta);
  for (double s : {-0.3, 0.0, 0.2, beta - kPi / 2.0}) {
    const double r = std::exp(s / 2.0);
    CHECK(std::abs(worm.value(pt({0, 0, r, 0}))) < 1e-15);
    CHECK(worm.value(pt({std::cos(s), std::sin(s), 0.0, r})) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(worm.value(pt({2 * std::cos(s), 2 * std::sin(s), r * std::cos(1.0), r * std::sin(1.0)}))) < 1e-14);
  }
  try {
    (void)worm.value(pt({0.1, 0, 0, 0}));
    FAIL("expected a domain error at w = 0");
  } catch (const DomainError& e) {
    CHECK(e.primitive() == "log");
  }
  CHECK_THROWS_AS(make_worm(1.5), std::invalid_argument);
}

TEST_CASE("weight examples") {
  const auto worm = make_worm(0.7 * kPi);
  const auto zero = weight(worm, [](std::span<const Jet2>) { return Jet2(0.0); });
  const auto kappa = weight(worm, [](std::span<const Jet2>) { return Jet2(0.4); });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd x = pt({u(rng), u(rng), 1.0 + 0.5 * u(rng), u(rng)});
    CHECK(zero.value(x) == worm.value(x));
    CHECK(kappa.value(x) == doctest::Approx(std::exp(0.4) * worm.value(x)).epsilon(1e-15));
  }
  const WormProfile prof = make_worm_profile(0.7 * kPi);
  const auto psi = weight(worm, [](std::span<const Jet2> v) { return sin(v[0]) + v[2] * v[3]; });
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd b = worm_boundary_point(prof, 0.8 * u(rng), kPi * u(rng), kPi * u(rng));
    CHECK(std::abs(psi.value(b)) < 1e-13);
  }
}

TEST_CASE("built-ins agree with finite differences at 100 random points") {
  const std::vector<DefiningFunction> builtins = {make_ball(2), make_ellipsoid({2.0, 1.0}),
                                                  make_complex_ellipsoid({1, 2}), make_worm(0.6 * kPi),
                                                  make_worm(1.2 * kPi)};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> rad(0.5, 2.0), ang(0.0, 2 * kPi);
  for (const auto& rho : builtins) {
    const oracle::Scalar f = [&](const Eigen::VectorXd& x) { return rho.value(x); };
    double worst_g = 0.0, worst_h = 0.0;
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd x = pt({u(rng), u(rng), u(rng), u(rng)});
      if (rho.name == "worm") {
        const double r = rad(rng), a = ang(rng);
        x(2) = r * std::cos(a);
        x(3) = r * std::sin(a);
      }
      const Jet2 j = rho.jet(x);
      const Eigen::VectorXd g = oracle::gradient(f, x, 1e-5);
      // Hessian by central differences (step 1e-5) of the AD gradient.
      for (int i = 0; i < 4; ++i) {
        worst_g = std::max(worst_g, oracle::rel_err(j.grad()(i), g(i)));
        Eigen::VectorXd p = x, m = x;
        p(i) += 1e-5;
        m(i) -= 1e-5;
        const Eigen::VectorXd col = (rho.jet(p).grad() - rho.jet(m).grad()) / 2e-5;
        for (int l = 0; l < 4; ++l) worst_h = std::max(worst_h, oracle::rel_err(j.hess()(l, i), col(l)));
      }
    }
    INFO(rho.name);
    CHECK(worst_g < 1e-6);
    CHECK(worst_h < 1e-6);
  }
}

TEST_CASE("gradient does not vanish near the boundary") {
  const std::vector<DefiningFunction> builtins = {make_ball(2), make_ellipsoid({2.0, 1.0}), make_worm(0.6 * kPi)};
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (const auto& rho : builtins) {
    int near = 0;
    for (int k = 0; k < 20000; ++k) {
      const Eigen::VectorXd x = pt({u(rng), u(rng), u(rng), u(rng)});
      if (rho.name == "worm" && x.tail(2).norm() < 1e-3) continue;
      const Jet2 j = rho.jet(x);
      if (std::abs(j.value()) >= 0.1) continue;
      ++near;
      CHECK(j.grad().norm() > 1e-6);
    }
    CHECK(near > 50);
  }
}

TEST_CASE("worm is pseudoconvex at 200 boundary samples") {
  const double beta = 0.6 * kPi;
  const auto worm = make_worm(beta);
  const WormProfile prof = make_worm_profile(beta);
  // log|w|^2 ranges where phi < 0.9, found on a grid.
  double smax = 0.0;
  while (worm_phi(smax + 1e-3, prof).value < 0.9) smax += 1e-3;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> s(-smax, smax), a(0.0, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd x = worm_boundary_point(prof, s(rng), a(rng), a(rng));
    CHECK(std::abs(worm.value(x)) < 1e-12);
    CHECK(classify(worm, x).lambda_min >= -1e-8);
  }
}
