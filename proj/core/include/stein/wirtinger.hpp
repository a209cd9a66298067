#pragma once

#include "stein/jet.hpp"

#include <Eigen/Dense>

#include <complex>

namespace stein {

using cplx = std::complex<double>;

/// Complex (Wirtinger) derivatives of a real function at a point.
///
///   holo_grad(j)     = d rho / d z_j
///   mixed_hess(j, k) = d^2 rho / d z_j d conj(z_k)    (Hermitian)
///   holo_hess(j, k)  = d^2 rho / d z_j d z_k          (symmetric)
struct LeviData {
  double value = 0.0;
  Eigen::VectorXcd holo_grad;
  Eigen::MatrixXcd mixed_hess;
  Eigen::MatrixXcd holo_hess;

  int n() const { return static_cast<int>(holo_grad.size()); }
};

/// Extracts complex derivatives from a real jet over (x_1, y_1, ..., x_n, y_n).
/// mixed_hess is Hermitian and holo_hess symmetric by construction.
LeviData complex_parts(const Jet2& jet);

/// Inverse of complex_parts for the second-order part: the real Hessian
/// determined by the mixed and holomorphic Hessians.
Eigen::MatrixXd real_hessian(const LeviData& data);

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x);
Eigen::VectorXd to_real(const Eigen::VectorXcd& z);

/// sum_{j,k} H_{jk} X_j conj(Y_k) for a Hermitian H.
cplx hermitian_form(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

/// The Euclidean Hermitian metric on (1,0) vectors, g(d/dz_j, d/dz_k) = delta_jk / 2.
cplx metric_g(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

/// X rho = sum_j X_j d rho / d z_j.
cplx apply_vector(const Eigen::VectorXcd& x, const Eigen::VectorXcd& holo_grad);

}  // namespace stein
