#pragma once

#include "stein/domains.hpp"
#include "stein/finite_difference.hpp"
#include "stein/wirtinger.hpp"

#include <Eigen/Dense>

#include <vector>

namespace stein {

enum class Pseudoconvexity { Strongly, Weakly, Indeterminate };

const char* to_string(Pseudoconvexity kind);

struct Classification {
  Pseudoconvexity kind = Pseudoconvexity::Indeterminate;
  /// Smallest eigenvalue of the Levi form restricted to the unit tangent frame.
  double lambda_min = 0.0;
  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues;
  /// Unit (1,0) tangent vectors spanning the eigenspaces with |lambda| <= eps_levi.
  std::vector<Eigen::VectorXcd> kernel;
};

/// A point of the boundary together with its complex normal and holomorphic
/// tangent frame. Vectors are coefficient vectors in the basis d/dz_j.
///
/// `normal` has unit Euclidean length, so g(N, N) = 1/2 for the metric
/// g(d/dz_j, d/dz_k) = delta_jk / 2, and N rho = |grad rho| / 2. Each frame
/// vector is unit length (g = 1/2) and annihilates rho.
struct BoundaryPoint {
  Eigen::VectorXd point;
  double rho_value = 0.0;
  Eigen::VectorXcd normal;
  std::vector<Eigen::VectorXcd> tangent_frame;
  Classification classification;
  double grad_norm = 0.0;

  Eigen::VectorXcd complex_point() const { return to_complex(point); }
};

inline constexpr double kDefaultEpsLevi = 1e-7;

struct ProjectionOptions {
  double tol_boundary = 1e-12;
  int max_iterations = 100;
  double eps_levi = kDefaultEpsLevi;
};

/// N_rho = conj(d rho) / |d rho|.
Eigen::VectorXcd complex_normal(const LeviData& data);

/// grad rho / |grad rho| in real coordinates.
Eigen::VectorXd real_unit_normal(const Jet2& jet);

/// Orthonormal basis of {T : sum_j T_j d rho/d z_j = 0}.
///
/// The standard basis vectors are stripped of their component along N; the
/// shortest one is dropped (lowest index on ties) and the remaining n - 1 are
/// orthonormalized in index order.
std::vector<Eigen::VectorXcd> holomorphic_tangent_frame(const LeviData& data);

/// Projects L so that L rho = 0 for the given derivatives. Used to extend a
/// boundary tangent vector off the boundary.
Eigen::VectorXcd extend_tangent(const Eigen::VectorXcd& boundary_vector, const LeviData& data);

/// L_rho(X, Y) = sum H_jk X_j conj(Y_k) at p.
cplx levi_form(const DefiningFunction& rho, const Eigen::VectorXd& p, const Eigen::VectorXcd& x,
               const Eigen::VectorXcd& y);

Classification classify(const LeviData& data, double eps_levi = kDefaultEpsLevi);
Classification classify(const DefiningFunction& rho, const Eigen::VectorXd& p, double eps_levi = kDefaultEpsLevi);

/// Assembles the boundary data at x without moving it.
BoundaryPoint make_boundary_point(const DefiningFunction& rho, const Eigen::VectorXd& x,
                                  double eps_levi = kDefaultEpsLevi);

/// Newton iteration along the real gradient until |rho| <= tol_boundary.
/// Throws ConvergenceError on a vanishing gradient or after max_iterations.
BoundaryPoint project_to_boundary(const DefiningFunction& rho, const Eigen::VectorXd& x0,
                                  const ProjectionOptions& options = {});

/// Newton iteration along the real gradient onto the level set {rho = level}.
Eigen::VectorXd project_to_level(const DefiningFunction& rho, const Eigen::VectorXd& x0, double level,
                                 double tol = 1e-12, int max_iterations = 100);

struct NormalDerivativeOptions {
  double step = 1e-3;
  double tolerance = 1e-4;
};

/// The value Lambda(z) = L_rho(L(z), L(z)) with L(z) the projection of
/// `boundary_vector` onto the tangent space of the level set through z.
double extended_levi_value(const DefiningFunction& rho, const Eigen::VectorXcd& boundary_vector,
                           const Eigen::VectorXd& z);

/// N L_rho(L, L) at a boundary point with L extended so that L rho = 0.
///
/// At a point where the boundary Levi value of L is minimal, N Lambda equals
/// conj(N) Lambda and hence half the derivative of Lambda along the real unit
/// normal N + conj(N); that derivative is taken by Richardson-extrapolated
/// central differences.
DirectionalDerivative normal_derivative_levi(const DefiningFunction& rho, const BoundaryPoint& p,
                                             const Eigen::VectorXcd& L, const NormalDerivativeOptions& options = {});

}  // namespace stein
