#include "stein/geometry.hpp"

#include "stein/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace stein {

const char* to_string(Pseudoconvexity kind) {
  switch (kind) {
    case Pseudoconvexity::Strongly:
      return "strongly";
    case Pseudoconvexity::Weakly:
      return "weakly";
    case Pseudoconvexity::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

Eigen::VectorXcd complex_normal(const LeviData& data) {
  const double s = data.holo_grad.norm();
  if (s == 0.0) throw ConvergenceError("complex_normal: vanishing gradient");
  return data.holo_grad.conjugate() / s;
}

Eigen::VectorXd real_unit_normal(const Jet2& jet) {
  const double len = jet.grad().norm();
  if (len == 0.0) throw ConvergenceError("real_unit_normal: vanishing gradient");
  return jet.grad() / len;
}

std::vector<Eigen::VectorXcd> holomorphic_tangent_frame(const LeviData& data) {
  const int n = data.n();
  const Eigen::VectorXcd u = complex_normal(data);

  std::vector<Eigen::VectorXcd> candidates;
  candidates.reserve(n);
  int shortest = 0;
  double shortest_norm = 0.0;
  for (int k = 0; k < n; ++k) {
    // e_k - <e_k, u> u with <a, b> = sum a_j conj(b_j)
    Eigen::VectorXcd v = -std::conj(u(k)) * u;
    v(k) += 1.0;
    const double len = v.norm();
    if (k == 0 || len < shortest_norm) {
      shortest = k;
      shortest_norm = len;
    }
    candidates.push_back(std::move(v));
  }

  std::vector<Eigen::VectorXcd> frame;
  frame.reserve(n - 1);
  for (int k = 0; k < n; ++k) {
    if (k == shortest) continue;
    Eigen::VectorXcd v = candidates[k];
    for (int pass = 0; pass < 2; ++pass) {
      v -= u.dot(v) * u;
      for (const auto& t : frame) v -= t.dot(v) * t;
    }
    frame.push_back(v / v.norm());
  }
  return frame;
}

Eigen::VectorXcd extend_tangent(const Eigen::VectorXcd& boundary_vector, const LeviData& data) {
  const double s2 = data.holo_grad.squaredNorm();
  if (s2 == 0.0) throw ConvergenceError("extend_tangent: vanishing gradient");
  const cplx applied = apply_vector(boundary_vector, data.holo_grad);
  return boundary_vector - (applied / s2) * data.holo_grad.conjugate();
}

cplx levi_form(const DefiningFunction& rho, const Eigen::VectorXd& p, const Eigen::VectorXcd& x,
               const Eigen::VectorXcd& y) {
  return hermitian_form(rho.levi(p).mixed_hess, x, y);
}

Classification classify(const LeviData& data, double eps_levi) {
  const auto frame = holomorphic_tangent_frame(data);
  const int m = static_cast<int>(frame.size());
  Classification out;
  if (m == 0) {
    out.kind = Pseudoconvexity::Strongly;
    out.lambda_min = std::numeric_limits<double>::infinity();
    return out;
  }
  // Entry (a, b) = L(T_b, T_a), so that c^* M c = L(sum c_b T_b, sum c_a T_a).
  Eigen::MatrixXcd restricted(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) restricted(a, b) = hermitian_form(data.mixed_hess, frame[b], frame[a]);
  restricted = 0.5 * (restricted + restricted.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(restricted);
  out.eigenvalues = eig.eigenvalues();
  out.lambda_min = out.eigenvalues(0);
  for (int i = 0; i < m; ++i) {
    if (std::abs(out.eigenvalues(i)) > eps_levi) continue;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(data.n());
    for (int b = 0; b < m; ++b) v += eig.eigenvectors()(b, i) * frame[b];
    out.kernel.push_back(v / v.norm());
  }
  if (out.lambda_min > eps_levi) {
    out.kind = Pseudoconvexity::Strongly;
  } else if (out.lambda_min >= -eps_levi) {
    out.kind = Pseudoconvexity::Weakly;
  } else {
    out.kind = Pseudoconvexity::Indeterminate;
  }
  return out;
}

Classification classify(const DefiningFunction& rho, const Eigen::VectorXd& p, double eps_levi) {
  return classify(rho.levi(p), eps_levi);
}

BoundaryPoint make_boundary_point(const DefiningFunction& rho, const Eigen::VectorXd& x, double eps_levi) {
  const Jet2 jet = rho.jet(x);
  const LeviData data = complex_parts(jet);
  BoundaryPoint bp;
  bp.point = x;
  bp.rho_value = jet.value();
  bp.grad_norm = jet.grad().norm();
  bp.normal = complex_normal(data);
  bp.tangent_frame = holomorphic_tangent_frame(data);
  bp.classification = classify(data, eps_levi);
  return bp;
}

Eigen::VectorXd project_to_level(const DefiningFunction& rho, const Eigen::VectorXd& x0, double level, double tol,
                                 int max_iterations) {
  Eigen::VectorXd x = x0;
  for (int it = 0; it <= max_iterations; ++it) {
    const Jet2 jet = rho.jet(x);
    const double r = jet.value() - level;
    if (std::abs(r) <= tol) return x;
    if (it == max_iterations) break;
    const double g2 = jet.grad().squaredNorm();
    if (!(g2 > 0.0)) throw ConvergenceError("project_to_boundary: vanishing gradient");
    x -= (r / g2) * Eigen::VectorXd(jet.grad());
  }
  throw ConvergenceError("project_to_boundary: no convergence in " + std::to_string(max_iterations) +
                         " iterations");
}

BoundaryPoint project_to_boundary(const DefiningFunction& rho, const Eigen::VectorXd& x0,
                                  const ProjectionOptions& options) {
  const Eigen::VectorXd x = project_to_level(rho, x0, 0.0, options.tol_boundary, options.max_iterations);
  return make_boundary_point(rho, x, options.eps_levi);
}

double extended_levi_value(const DefiningFunction& rho, const Eigen::VectorXcd& boundary_vector,
                           const Eigen::VectorXd& z) {
  const LeviData data = rho.levi(z);
  const Eigen::VectorXcd L = extend_tangent(boundary_vector, data);
  return hermitian_form(data.mixed_hess, L, L).real();
}

DirectionalDerivative normal_derivative_levi(const DefiningFunction& rho, const BoundaryPoint& p,
                                             const Eigen::VectorXcd& L, const NormalDerivativeOptions& options) {
  const Eigen::VectorXd nu = real_unit_normal(rho.jet(p.point));
  const auto lambda = [&](const Eigen::VectorXd& z) { return extended_levi_value(rho, L, z); };
  DirectionalDerivative d =
      normal_third_derivative(lambda, p.point, nu, RichardsonOptions{options.step, 2.0 * options.tolerance});
  d.derivative *= 0.5;
  d.error_indicator *= 0.5;
  return d;
}

}  // namespace stein
