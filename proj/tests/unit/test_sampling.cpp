#include "doctest.h"

#include "stein/domains.hpp"
#include "stein/sampling.hpp"
#include "stein/worm.hpp"

#include <cmath>
#include <numbers>

using namespace stein;

TEST_CASE("low-discrepancy points are deterministic and in the unit cube") {
  LowDiscrepancySequence a(4, 9), b(4, 9), c(4, 10);
  bool differs = false;
  for (int k = 0; k < 500; ++k) {
    const Eigen::VectorXd x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() < 1.0);
  }
  CHECK(differs);
}

TEST_CASE("low-discrepancy points fill the cube evenly") {
  LowDiscrepancySequence seq(2, 1);
  int counts[4][4] = {};
  for (int k = 0; k < 1600; ++k) {
    const Eigen::VectorXd x = seq.next();
    ++counts[static_cast<int>(x(0) * 4)][static_cast<int>(x(1) * 4)];
  }
  for (auto& row : counts)
    for (int c : row) CHECK(std::abs(c - 100) <= 10);
}

TEST_CASE("to_unit_sphere lands on the sphere") {
  LowDiscrepancySequence seq(4, 2);
  for (int k = 0; k < 200; ++k) CHECK(to_unit_sphere(seq.next()).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("radial boundary samples lie on the boundary") {
  const auto ell = make_ellipsoid({2.0, 1.0});
  const auto pts = radial_boundary_samples(ell, Eigen::VectorXd::Zero(4), 300, 5);
  CHECK(pts.size() == 300);
  for (const auto& x : pts) CHECK(std::abs(ell.value(x)) <= 1e-12);
  CHECK(pts == radial_boundary_samples(ell, Eigen::VectorXd::Zero(4), 300, 5));
}

TEST_CASE("shell samples respect side and depth") {
  const auto ball = make_ball(2);
  const auto anchors = radial_boundary_samples(ball, Eigen::VectorXd::Zero(4), 64, 1);
  const ShellSpec spec{1e-3, 5e-2, 400, 3};
  for (Side side : {Side::Inner, Side::Outer}) {
    const auto shell = sample_shell(ball, anchors, spec, side);
    CHECK(shell.size() == spec.samples);
    for (const auto& x : shell) {
      const double r = ball.value(x);
      CHECK((side == Side::Inner ? r < 0.0 : r > 0.0));
      CHECK(std::abs(r) >= spec.depth_min * (1 - 1e-9));
      CHECK(std::abs(r) <= spec.depth_max * (1 + 1e-9));
    }
    CHECK(shell == sample_shell(ball, anchors, spec, side));
  }
  CHECK(std::string(to_string(Side::Inner)) == "inner");
  CHECK(std::string(to_string(Side::Outer)) == "outer");
}

TEST_CASE("worm shells anchored on Sigma stay near Sigma") {
  const double beta = 1.2 * std::numbers::pi;
  const auto worm = make_worm(beta);
  std::vector<Eigen::VectorXd> anchors;
  for (const auto& p : worm_sigma(worm, 40)) anchors.push_back(p.point);
  const auto shell = sample_shell(worm, anchors, {1e-4, 1e-2, 200, 1}, Side::Outer);
  for (const auto& x : shell) {
    CHECK(worm.value(x) > 0.0);
    CHECK(x.head(2).norm() < 0.02);
  }
}
