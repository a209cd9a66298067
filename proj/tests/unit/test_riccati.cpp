#include "doctest.h"
#include "oracles.hpp"

#include "stein/errors.hpp"
#include "stein/riccati.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace stein;

namespace {

constexpr double kPi = std::numbers::pi;

// s(t) written out again, independent of the library.
double closed(double a, double b, double phi, double t) {
  return -std::sqrt(b / a) / std::tan(std::sqrt(a * b) * std::log(t) + phi) / t;
}

}  // namespace

TEST_CASE("closed form examples") {
  CHECK(std::abs(riccati_closed_form(1, 1, kPi / 2, 1.0)) < 1e-15);
  CHECK(riccati_closed_form(2, 8, kPi / 4, 1.0) == doctest::Approx(-2.0).epsilon(1e-14));
  for (double t : {0.8, 1.1, 1.4}) CHECK(riccati_closed_form(2, 8, kPi / 4, t) == doctest::Approx(closed(2, 8, kPi / 4, t)));
  CHECK_THROWS_AS(riccati_closed_form(1, 1, kPi / 2, std::exp(kPi / 2)), SingularityError);
  CHECK_THROWS_AS(riccati_closed_form(1, 1, 0.0, 1.0), SingularityError);
}

TEST_CASE("closed form solves the equation") {
  struct Case {
    double a, b, phi, lo, hi;
  };
  for (const Case c : {Case{1, 1, kPi / 2, 0.7, 1.4}, Case{2, 8, kPi / 4, 0.9, 1.4}, Case{0.5, 3, 1.0, 0.7, 1.4}}) {
    double worst_ad = 0.0, worst_fd = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double t = c.lo + (c.hi - c.lo) * k / 49.0;
      const Jet2 s = riccati_closed_form(c.a, c.b, c.phi, Jet2::variable(t, 0, 1));
      const double rhs = c.a * s.value() * s.value() - s.value() / t + c.b / (t * t);
      worst_ad = std::max(worst_ad, std::abs(s.grad()(0) - rhs));
      const double h = 1e-5;
      const double fd = (closed(c.a, c.b, c.phi, t + h) - closed(c.a, c.b, c.phi, t - h)) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - rhs));
    }
    CHECK(worst_ad <= 1e-8);
    CHECK(worst_fd <= 1e-5);
    CHECK(riccati_check(c.a, c.b, c.phi, c.lo, c.hi).ode_residual <= 1e-8);
  }
}

TEST_CASE("rhs") { CHECK(riccati_rhs(2, 3, 2, 1.5) == doctest::Approx(2 * 2.25 - 0.75 + 0.75)); }

TEST_CASE("RK4 matches the closed form") {
  const RiccatiCheck a = riccati_check(1, 1, kPi / 2, 1.0, 1.5);
  CHECK(a.sup_error <= 1e-6);
  CHECK(a.trajectory.front().t == 1.0);
  CHECK(a.trajectory.back().t == 1.5);
  CHECK(std::abs(a.trajectory.front().s) < 1e-15);

  const RiccatiCheck b = riccati_check(2, 8, kPi / 4, 1.0, 1.2);
  CHECK(b.sup_error <= 1e-6);
  CHECK(b.trajectory.front().s == doctest::Approx(-2.0));

  // Backwards, and with a step that does not divide the interval.
  const auto back = riccati_integrate(2, 8, 1.2, closed(2, 8, kPi / 4, 1.2), 0.9, 7e-4);
  CHECK(back.back().t == 0.9);
  CHECK(back.back().s == doctest::Approx(closed(2, 8, kPi / 4, 0.9)).epsilon(1e-8));
  for (std::size_t i = 1; i < back.size(); ++i) CHECK(back[i].t < back[i - 1].t);
}

TEST_CASE("zero-length interval") {
  const auto traj = riccati_integrate(1, 1, 1.3, 0.25, 1.3);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].t == 1.3);
  CHECK(traj[0].s == 0.25);
}

TEST_CASE("integration across a pole is reported") {
  // log t + pi/2 reaches pi at t = e^{pi/2}.
  CHECK_THROWS_AS(riccati_integrate(1, 1, 1.0, 0.0, 6.0), SingularityError);
  CHECK_THROWS_AS(riccati_integrate(1, 1, 1.0, 0.0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(riccati_integrate(-1, 1, 1.0, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("phase recovers the closed-form parameter") {
  for (double phi : {0.3, 1.0, kPi / 2, 2.5}) {
    const double t0 = 1.2;
    const double s0 = closed(1.5, 2.0, phi, t0);
    const double got = riccati_phase(1.5, 2.0, t0, s0);
    CHECK(riccati_closed_form(1.5, 2.0, got, 1.3) == doctest::Approx(closed(1.5, 2.0, phi, 1.3)).epsilon(1e-10));
  }
}

TEST_CASE("trajectory CSV") {
  const RiccatiCheck c = riccati_check(1, 1, kPi / 2, 1.0, 1.01, 5e-3);
  std::ostringstream os;
  write_trajectory_csv(os, c);
  CHECK(os.str().rfind("t,s,closed_form\n", 0) == 0);
  int lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  CHECK(lines == static_cast<int>(c.trajectory.size()) + 1);
}
