#pragma once

// Sample-certified estimates of the Diederich-Fornaess exponent (inner
// shell, -(-rho)^eta) and the Steinness exponent (outer shell, rho^eta) of a
// given defining function. Certification only holds at the sampled points.

#include "stein/domains.hpp"
#include "stein/geometry.hpp"
#include "stein/sampling.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <ostream>
#include <vector>

namespace stein {

/// Margins at or below this are not counted as certified.
inline constexpr double kMarginFloor = 1e-9;

struct Witness {
  Eigen::VectorXd point;
  Eigen::VectorXcd eigenvector;
  double eigenvalue = 0.0;
};

struct MarginResult {
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> witness;
  std::vector<double> margins;  ///< per point, in input order
};

/// Smallest eigenvalue of the mixed Hessian of `field` over `points`. The
/// witness is the first point attaining the minimum.
MarginResult psh_margin(const Field& field, const std::vector<Eigen::VectorXd>& points);

struct EtaGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1e-3;

  static EtaGrid inner_default() { return {0.01, 0.99, 1e-3}; }
  static EtaGrid outer_default() { return {1.01, 4.0, 1e-3}; }

  int size() const;
  double at(int k) const;
};

struct ExponentEstimate {
  Side side = Side::Inner;
  double eta = 0.0;
  bool certified = false;
  double min_margin = 0.0;
  std::optional<Witness> witness;
  std::size_t samples_used = 0;
  double depth_min = 0.0;
  double depth_max = 0.0;
  std::vector<double> margins;  ///< per sample at the reported eta
};

/// -(-rho)^eta.
Field df_power_field(const Field& rho, double eta);
/// rho^eta.
Field steinness_power_field(const Field& rho, double eta);

/// Largest grid eta in (0, 1) for which -(-rho)^eta has a positive margin on
/// the inner shell points. Uncertified estimates report eta = grid.lo with the
/// witness of the failure there.
ExponentEstimate df_exponent_lower(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& shell,
                                   const EtaGrid& grid = EtaGrid::inner_default());

/// Smallest grid eta > 1 for which rho^eta has a positive margin on the
/// outer shell points. Uncertified estimates report eta = grid.hi.
ExponentEstimate steinness_exponent_upper(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& shell,
                                          const EtaGrid& grid = EtaGrid::outer_default());

/// |L_rho(L,N)|^2 - L_rho(L,L) (L_rho(N,N) + (eta2-1)/rho |N rho|^2) at an
/// outside point z, with L projected so that L rho(z) = 0. Negative means the
/// complex Hessian of rho^eta2 is positive definite on span(L, N).
///
/// When |L| < 1e-12 after projection the pure normal term
/// -(L_rho(N,N) + (eta2-1)/rho |N rho|^2) is returned instead.
double determinant_condition(const DefiningFunction& rho, const Eigen::VectorXd& z, const Eigen::VectorXcd& L,
                             double eta2);

struct SsnbConstant {
  double c_best = std::numeric_limits<double>::infinity();
  double M = 0.0;
  double eta2_bound = std::numeric_limits<double>::infinity();
  Eigen::VectorXd worst_point;
};

/// c_best = inf L_rho(L,L) / (rho g(L,L)) over outer points and tangent L;
/// M = max |L_rho(L,N)|^2 / |grad rho|^2 over kernel vectors at the Sigma points;
/// eta2_bound = 8 M / c_best + 1 when c_best > 0.
SsnbConstant ssnb_constant(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& outer_points,
                           const std::vector<BoundaryPoint>& sigma_points);

nlohmann::json to_json(const ExponentEstimate& e);
nlohmann::json to_json(const SsnbConstant& c);

/// Per-sample margins: index,<coordinates...>,margin
void write_margin_csv(std::ostream& out, const std::vector<Eigen::VectorXd>& points, const std::vector<double>& margins);

}  // namespace stein
