#pragma once

// Reference computations that share no code with the library.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracle {

using Scalar = std::function<double(const Eigen::VectorXd&)>;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline Eigen::VectorXd gradient(const Scalar& f, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p(i) += h;
    m(i) -= h;
    g(i) = (f(p) - f(m)) / (2 * h);
  }
  return g;
}

/// Second differences of values; mixed entries from the four-point stencil.
inline Eigen::MatrixXd hessian(const Scalar& f, const Eigen::VectorXd& x, double h = 1e-4) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd p = x, m = x;
    p(i) += h;
    m(i) -= h;
    H(i, i) = (f(p) - 2 * f0 + f(m)) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp(i) += h; pp(j) += h;
      pm(i) += h; pm(j) -= h;
      mp(i) -= h; mp(j) += h;
      mm(i) -= h; mm(j) -= h;
      H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
    }
  }
  return H;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace oracle
