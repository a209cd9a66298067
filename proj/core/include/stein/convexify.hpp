#pragma once

// A defining function of a convex body in R^n that is strictly convex off the
// boundary, assembled from smooth maxima of the Minkowski gauge with
// quadratics and truncated after K terms.

#include "stein/jet.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace stein {

/// chi(t) = |t| for |t| >= eps; inside, chi'' = (15 / (8 eps)) (1 - (t/eps)^2)^2
/// with chi(0) = 5 eps / 16 so that chi is C^2 at +-eps.
struct SmoothMaxProfile {
  double epsilon = 1.0;

  double chi(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

/// (x + y + chi(x - y)) / 2. Exactly max(x, y) once |x - y| >= eps.
double smooth_max(double x, double y, const SmoothMaxProfile& profile);
Jet2 smooth_max(const Jet2& x, const Jet2& y, const SmoothMaxProfile& profile);

/// A body in R^2 or R^4 star-shaped about the origin, given by its boundary
/// radius r(u) along unit directions u. `radial` is written against Jet2 so
/// the gauge can be differentiated.
struct StarBody {
  std::string name;
  int n_real = 2;
  nlohmann::json params = nlohmann::json::object();
  Field radial;

  double radius(const Eigen::VectorXd& u) const;
  Eigen::VectorXd boundary_point(const Eigen::VectorXd& u) const;
};

StarBody make_disc(double radius = 1.0, int n_real = 2);
/// Axis-aligned ellipsoid with semi-axes `axes` (one per real coordinate).
StarBody make_ellipsoid_body(const std::vector<double>& axes);
StarBody make_ellipse(double a, double b);

/// sigma(x) = |x| / r(x/|x|) - 1, and -1 at the origin.
double minkowski_sigma(const StarBody& body, const Eigen::VectorXd& x);
/// The gauge as a field. At the origin, where it is not differentiable, the
/// jet is the constant -1.
Field minkowski_field(const StarBody& body);

/// Outward unit normal of the boundary at the boundary point along u.
Eigen::VectorXd boundary_normal(const StarBody& body, const Eigen::VectorXd& u);

/// Boundary points of the body along quasi-random (R^4) or equally spaced
/// (R^2) directions.
std::vector<Eigen::VectorXd> body_boundary_samples(const StarBody& body, std::size_t count, std::uint64_t seed = 7);

/// Signed distance to the boundary, negative inside, estimated as the nearest
/// of a dense set of boundary samples. Exact for balls.
class SignedDistance {
 public:
  SignedDistance(const StarBody& body, std::size_t samples);
  double operator()(const Eigen::VectorXd& x) const;

 private:
  StarBody body_;
  bool round_ = false;
  double radius_ = 0.0;
  std::vector<Eigen::VectorXd> boundary_;
};

/// Largest sigma over sampled segment midpoints between boundary points; a
/// convex body gives <= 0.
double convexity_defect(const StarBody& body, std::size_t pairs, std::uint64_t seed = 11);

struct ConvexifyOptions {
  std::size_t boundary_samples = 0;  ///< 0 picks 4096 in R^2, 16384 in R^4
  std::size_t collar_samples = 3000;
  std::uint64_t seed = 1;
};

/// One inner term rho_eps = max~_band(sigma, d1 |x|^2 - d2).
struct InnerPiece {
  double epsilon = 0.0;
  double S = 0.0;  ///< max sigma on the inner offset surface at depth eps
  double M = 0.0;  ///< max |x|^2 on the boundary
  double m = 0.0;  ///< min |x|^2 on the closure of the inner region (the origin lies in it)
  double delta1 = 0.0;
  double delta2 = 0.0;
  double band = 0.0;
  double c = 0.0;
  double eta = 0.0;
};

/// One outer term rho~_eps = max~_band(0, sigma + d1 |x|^2 - d2).
struct OuterPiece {
  double epsilon = 0.0;
  double S = 0.0;  ///< min sigma on the outer offset surface at distance eps
  double M = 0.0;  ///< max |x|^2 on the boundary
  double m = 0.0;  ///< min |x|^2 on the outer offset surface
  double delta1 = 0.0;
  double delta2 = 0.0;
  double band = 0.0;
  double c = 0.0;
  double eta = 0.0;
};

struct Convexified {
  StarBody body;
  int K = 0;
  double epsilon0 = 0.0;  ///< pieces use epsilon0 / j
  std::vector<InnerPiece> inner;
  std::vector<OuterPiece> outer;
  Field field;

  double value(const Eigen::VectorXd& x) const;
};

/// Builds the K-term defining function. Throws ConstructionError when the
/// body fails the sampled convexity check or a separation inequality
/// d1 M < d2 < d1 m - S (inner) / d1 M < d2 < d1 m + S (outer) has no solution.
Convexified convexify(const StarBody& body, int K, const ConvexifyOptions& options = {});

struct ConvexCertificate {
  double gap = 0.0;  ///< test points satisfy |delta| > gap
  std::size_t hessian_points = 0;
  double min_hessian_eigenvalue = 0.0;
  Eigen::VectorXd worst_point;
  std::size_t boundary_points = 0;
  double max_boundary_abs = 0.0;
  std::size_t sign_points = 0;
  std::size_t sign_mismatches = 0;
  bool passed = false;
};

/// Hessian scan at `hessian_points` quasi-random points with |delta| > 1/K,
/// |rho| at boundary samples, and sign agreement with the gauge everywhere
/// sampled.
ConvexCertificate certify_convexified(const Convexified& c, std::size_t hessian_points = 500,
                                      std::size_t boundary_points = 200, std::uint64_t seed = 3);

nlohmann::json to_json(const Convexified& c);
nlohmann::json to_json(const ConvexCertificate& cert);

}  // namespace stein
