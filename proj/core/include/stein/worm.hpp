#pragma once

// Worm-domain analysis on the weakly pseudoconvex annulus
//
//   Sigma = {(0, w) : |log |w|^2| <= beta - pi/2}.

#include "stein/criteria.hpp"
#include "stein/domains.hpp"
#include "stein/geometry.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <vector>

namespace stein {

/// Radii [exp(-(beta/2 - pi/4)), exp(beta/2 - pi/4)] of Sigma.
struct RadiusInterval {
  double lo = 1.0;
  double hi = 1.0;
};
RadiusInterval worm_sigma_radii(double beta);

bool worm_in_sigma(double beta, const Eigen::VectorXd& x, double tol = 1e-12);

/// m points (0, r e^{i theta}) with r uniform on the Sigma radii (endpoints
/// included, r = 1 when m = 1) and theta stepping by the golden angle.
std::vector<BoundaryPoint> worm_sigma(const DefiningFunction& worm, int m);
std::vector<BoundaryPoint> worm_sigma(double beta, int m);

/// pi / (2 (pi - beta)), infinite for beta >= pi.
double worm_threshold(double beta);

/// True iff alpha (beta - pi/2) < pi/2 with alpha = 1/(eta2 - 1) + 1, i.e.
/// eta2 > pi / (2 (pi - beta)). Values within a relative 1e-12 of the
/// threshold count as at the threshold.
bool threshold_check(double beta, double eta2);

struct IndexFormulas {
  double df = 0.0;
  double steinness = 0.0;  ///< +inf for beta >= pi
  /// 1/df + 1/steinness when steinness is finite.
  std::optional<double> reciprocal() const;
};
IndexFormulas index_formulas(double beta);

/// -(1/alpha) log cos(2 alpha log r) without any range check.
double worm_psi_profile(double alpha, double r);

/// The Riccati weight psi(r) for eta2 above the threshold and r in the
/// Sigma radii. Throws ThresholdError or DomainError.
double worm_psi(double beta, double eta2, double r);

/// psi(|w|) as a field on C^2.
Field worm_psi_field(double beta, double eta2);

/// max |weighted_Q| over m Sigma samples with the Riccati weight and kernel L.
double worm_criterion_verify(double beta, double eta2, int m, const CriterionOptions& options = {});

/// Kernel vector of the Levi form at a Sigma point. Throws if the
/// classification found no kernel.
const Eigen::VectorXcd& sigma_kernel(const BoundaryPoint& p);

struct WormReportOptions {
  int sigma_samples = 50;
  double eta2 = 2.0;
  /// "riccati", "none" or "auto" (riccati when above the threshold).
  std::string psi = "none";
  CriterionOptions criterion;
};

struct WormReport {
  double beta = 0.0;
  IndexFormulas formulas;
  double threshold = 0.0;
  bool above_threshold = false;
  std::vector<BoundaryPoint> sigma_samples;
  std::vector<CriterionSample> criterion_rows;
  double max_abs_Q = 0.0;
  double max_abs_combined = 0.0;
};

WormReport worm_report(double beta, const WormReportOptions& options = {});

nlohmann::json to_json(const WormReport& report);

/// beta,df_formula,steinness_formula,reciprocal_check (inf / empty when infinite)
void write_beta_sweep_csv(std::ostream& out, const std::vector<double>& betas);

}  // namespace stein
