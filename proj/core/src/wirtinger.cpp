#include "stein/wirtinger.hpp"

#include <stdexcept>

namespace stein {

LeviData complex_parts(const Jet2& jet) {
  const int dim = jet.dim();
  if (dim == 0 || dim % 2 != 0)
    throw std::invalid_argument("complex_parts: jet dimension must be even and positive");
  const int n = dim / 2;
  const auto& g = jet.grad();
  const auto& h = jet.hess();

  LeviData out;
  out.value = jet.value();
  out.holo_grad.resize(n);
  out.mixed_hess.resize(n, n);
  out.holo_hess.resize(n, n);

  for (int j = 0; j < n; ++j) out.holo_grad(j) = 0.5 * cplx(g(2 * j), -g(2 * j + 1));

  for (int j = 0; j < n; ++j) {
    const int xj = 2 * j;
    const int yj = 2 * j + 1;
    for (int k = j; k < n; ++k) {
      const int xk = 2 * k;
      const int yk = 2 * k + 1;
      const cplx mixed(0.25 * (h(xj, xk) + h(yj, yk)), j == k ? 0.0 : 0.25 * (h(xj, yk) - h(yj, xk)));
      const cplx holo(0.25 * (h(xj, xk) - h(yj, yk)), -0.25 * (h(xj, yk) + h(yj, xk)));
      out.mixed_hess(j, k) = mixed;
      out.mixed_hess(k, j) = std::conj(mixed);
      out.holo_hess(j, k) = holo;
      out.holo_hess(k, j) = holo;
    }
  }
  return out;
}

Eigen::MatrixXd real_hessian(const LeviData& data) {
  const int n = data.n();
  Eigen::MatrixXd h(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const cplx sum = data.mixed_hess(j, k) + data.holo_hess(j, k);
      const cplx diff = data.mixed_hess(j, k) - data.holo_hess(j, k);
      h(2 * j, 2 * k) = 2.0 * sum.real();
      h(2 * j + 1, 2 * k) = -2.0 * sum.imag();
      h(2 * j + 1, 2 * k + 1) = 2.0 * diff.real();
      h(2 * j, 2 * k + 1) = 2.0 * diff.imag();
    }
  }
  return h;
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("to_complex: odd real dimension");
  Eigen::VectorXcd z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = cplx(x(2 * j), x(2 * j + 1));
  return z;
}

Eigen::VectorXd to_real(const Eigen::VectorXcd& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x(2 * j) = z(j).real();
    x(2 * j + 1) = z(j).imag();
  }
  return x;
}

cplx hermitian_form(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  // sum_{j,k} H_jk X_j conj(Y_k) = X^T H conj(Y)
  return (x.array() * (h * y.conjugate()).array()).sum();
}

cplx metric_g(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return 0.5 * (x.array() * y.conjugate().array()).sum();
}

cplx apply_vector(const Eigen::VectorXcd& x, const Eigen::VectorXcd& holo_grad) {
  return (x.array() * holo_grad.array()).sum();
}

}  // namespace stein
