#pragma once

// Second-order forward-mode dual numbers over R^{2n}.
//
// A Jet2 carries the value, real gradient and real Hessian of a scalar
// function with respect to the seeded coordinates. Coordinates are ordered
// (x_1, y_1, ..., x_n, y_n) with z_j = x_j + i y_j. A Jet2 of dimension 0 is
// a plain constant and mixes freely with jets of any dimension.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace stein {

inline constexpr int kMaxVars = 8;

using Gradient = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxVars, 1>;
using Hessian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxVars, kMaxVars>;

class Jet2 {
 public:
  Jet2() : Jet2(0.0) {}
  // NOLINTNEXTLINE(google-explicit-constructor): constants promote implicitly.
  Jet2(double value) : value_(value), grad_(0), hess_(0, 0) {}

  static Jet2 constant(double value, int dim);
  /// Coordinate `index` of a `dim`-dimensional space, evaluated at `value`.
  static Jet2 variable(double value, int index, int dim);
  /// Assembles a jet from parts. `hess` must be exactly symmetric.
  static Jet2 from_parts(double value, Gradient grad, Hessian hess);

  double value() const { return value_; }
  const Gradient& grad() const { return grad_; }
  const Hessian& hess() const { return hess_; }
  int dim() const { return static_cast<int>(grad_.size()); }

  Jet2& operator+=(const Jet2& other);
  Jet2& operator-=(const Jet2& other);
  Jet2& operator*=(const Jet2& other);
  Jet2& operator/=(const Jet2& other);

  Jet2 operator-() const;

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

 private:
  Jet2(double value, Gradient grad, Hessian hess)
      : value_(value), grad_(std::move(grad)), hess_(std::move(hess)) {}

  friend Jet2 chain(const Jet2& a, double f, double df, double d2f);

  double value_;
  Gradient grad_;
  Hessian hess_;
};

/// Composes a scalar primitive with value f, slope df and curvature d2f at
/// a.value() onto the jet `a`.
Jet2 chain(const Jet2& a, double f, double df, double d2f);

Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 cot(const Jet2& a);
Jet2 sqrt(const Jet2& a);
/// Real power. Noninteger exponents require a positive base.
Jet2 pow(const Jet2& a, double exponent);
Jet2 square(const Jet2& a);
/// x^2 + y^2, i.e. |z|^2 for z = x + i y.
Jet2 abs2(const Jet2& x, const Jet2& y);

/// A scalar field written once against Jet2 variables. Feeding it seeded
/// variables yields value, gradient and Hessian; feeding it constants is a
/// plain evaluation.
using Field = std::function<Jet2(std::span<const Jet2>)>;

Jet2 evaluate_jet(const Field& field, std::span<const double> x);
Jet2 evaluate_jet(const Field& field, const Eigen::VectorXd& x);
double evaluate_value(const Field& field, const Eigen::VectorXd& x);

}  // namespace stein
