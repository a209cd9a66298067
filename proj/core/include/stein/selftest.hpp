#pragma once

// Internal consistency checks shared by the CLI `selftest` command and the
// test suites.

#include "stein/domains.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace stein {

/// A smooth real weight on R^{2n}: an affine part, a small quadratic part and
/// one sine ridge, with coefficients drawn from `seed`.
Field random_smooth_psi(int n, std::uint64_t seed);

struct FiniteDifferenceReport {
  std::string domain;
  int points = 0;
  double grad_rel = 0.0;  ///< max |AD - FD| / max(1, |AD|) over gradient entries
  double hess_rel = 0.0;  ///< same for Hessian entries (FD of the AD gradient)
};

/// Compares AD derivatives against central differences with step 1e-5 at
/// random points of the evaluation region.
FiniteDifferenceReport ad_fd_consistency(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& points,
                                         double step = 1e-5);

/// Random points of the evaluation region of a built-in domain: a box of
/// half-width 1.5 around the origin, with |w| kept in [0.5, 2] for the worm.
std::vector<Eigen::VectorXd> random_region_points(const DefiningFunction& rho, int count, std::uint64_t seed);

struct SelftestReport {
  int psi_count = 0;
  int sigma_points = 0;
  double keylem_r1 = 0.0;
  double keylem_r2 = 0.0;
  std::vector<FiniteDifferenceReport> finite_differences;
  double keylem_tolerance = 1e-5;
  double fd_tolerance = 1e-6;
  bool passed() const;
};

/// Keylemma residuals for `psi_count` random weights at `sigma_points` worm
/// Sigma points (beta = 0.6 pi), plus AD/FD consistency for every built-in.
SelftestReport run_selftest(std::uint64_t seed = 1, int psi_count = 10, int sigma_points = 20, int fd_points = 100);

nlohmann::json to_json(const SelftestReport& report);

}  // namespace stein
