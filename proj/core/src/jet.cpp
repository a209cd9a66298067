#include "stein/jet.hpp"

#include "stein/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace stein {
namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Brings two jets to a common dimension. A dimension-0 jet is a constant.
int common_dim(const Jet2& a, const Jet2& b) {
  if (a.dim() == b.dim()) return a.dim();
  if (a.dim() == 0) return b.dim();
  if (b.dim() == 0) return a.dim();
  throw std::invalid_argument("Jet2: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()));
}

// Vectorized and contracted (fma) loops may round mirrored entries
// differently; the lower triangle is copied from the upper one.
void symmetrize(Hessian& h) {
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = j + 1; i < h.rows(); ++i) h(i, j) = h(j, i);
}

}  // namespace

Jet2 Jet2::constant(double value, int dim) {
  return Jet2(value, Gradient::Zero(dim), Hessian::Zero(dim, dim));
}

Jet2 Jet2::variable(double value, int index, int dim) {
  if (dim > kMaxVars) throw std::invalid_argument("Jet2: more than kMaxVars variables");
  if (index < 0 || index >= dim) throw std::out_of_range("Jet2: variable index out of range");
  Jet2 j = constant(value, dim);
  j.grad_(index) = 1.0;
  return j;
}

Jet2 Jet2::from_parts(double value, Gradient grad, Hessian hess) {
  if (hess.rows() != grad.size() || hess.cols() != grad.size())
    throw std::invalid_argument("Jet2: gradient/Hessian size mismatch");
  return Jet2(value, std::move(grad), std::move(hess));
}

Jet2& Jet2::operator+=(const Jet2& other) {
  const int d = common_dim(*this, other);
  value_ += other.value_;
  if (other.dim() == 0) return *this;
  if (dim() == 0) {
    grad_ = other.grad_;
    hess_ = other.hess_;
  } else {
    grad_ += other.grad_;
    hess_ += other.hess_;
  }
  (void)d;
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& other) { return *this += -other; }

Jet2& Jet2::operator*=(const Jet2& other) {
  const int d = common_dim(*this, other);
  const double a = value_;
  const double b = other.value_;
  if (d == 0) {
    value_ = a * b;
    return *this;
  }
  if (other.dim() == 0) {
    value_ = a * b;
    grad_ *= b;
    hess_ *= b;
    return *this;
  }
  if (dim() == 0) {
    value_ = a * b;
    grad_ = a * other.grad_;
    hess_ = a * other.hess_;
    return *this;
  }
  Hessian cross = grad_ * other.grad_.transpose();
  cross += other.grad_ * grad_.transpose();
  hess_ = b * hess_ + a * other.hess_ + cross;
  symmetrize(hess_);
  grad_ = b * grad_ + a * other.grad_;
  value_ = a * b;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& other) {
  const double b = other.value_;
  if (b == 0.0) throw DomainError("div", "division by zero");
  return *this *= chain(other, 1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b));
}

Jet2 Jet2::operator-() const { return Jet2(-value_, -grad_, -hess_); }

Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  if (a.dim() == 0) return Jet2(f);
  Hessian h = df * a.hess_;
  h += d2f * (a.grad_ * a.grad_.transpose());
  symmetrize(h);
  return Jet2(f, df * a.grad_, std::move(h));
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log", "nonpositive argument " + describe(x));
  return chain(a, std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return chain(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return chain(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  const double c = std::cos(a.value());
  if (c == 0.0) throw DomainError("tan", "pole at " + describe(a.value()));
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}

Jet2 cot(const Jet2& a) {
  const double s = std::sin(a.value());
  if (s == 0.0) throw DomainError("cot", "pole at " + describe(a.value()));
  const double ct = std::cos(a.value()) / s;
  const double csc2 = 1.0 + ct * ct;
  return chain(a, ct, -csc2, 2.0 * ct * csc2);
}

Jet2 sqrt(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) {
    if (x == 0.0 && a.dim() == 0) return Jet2(0.0);
    throw DomainError("sqrt", "nonpositive argument " + describe(x));
  }
  const double r = std::sqrt(x);
  return chain(a, r, 0.5 / r, -0.25 / (r * x));
}

Jet2 pow(const Jet2& a, double exponent) {
  const double x = a.value();
  const double k = exponent;
  const bool integral = std::floor(k) == k;
  if (!integral && !(x > 0.0))
    throw DomainError("pow", "noninteger power of nonpositive base " + describe(x));
  if (integral && k < 0.0 && x == 0.0) throw DomainError("pow", "negative power of zero");
  if (k == 0.0) return Jet2::constant(1.0, a.dim());
  if (k == 1.0) return a;
  if (k == 2.0) return square(a);
  const double f = std::pow(x, k);
  const double df = k * std::pow(x, k - 1.0);
  const double d2f = k * (k - 1.0) * std::pow(x, k - 2.0);
  return chain(a, f, df, d2f);
}

Jet2 square(const Jet2& a) { return chain(a, a.value() * a.value(), 2.0 * a.value(), 2.0); }

Jet2 abs2(const Jet2& x, const Jet2& y) { return square(x) + square(y); }

Jet2 evaluate_jet(const Field& field, std::span<const double> x) {
  const int dim = static_cast<int>(x.size());
  std::vector<Jet2> vars;
  vars.reserve(x.size());
  for (int i = 0; i < dim; ++i) vars.push_back(Jet2::variable(x[i], i, dim));
  Jet2 out = field(vars);
  // A field that ignores its arguments returns a dimension-0 constant.
  if (out.dim() == 0 && dim > 0) return Jet2::constant(out.value(), dim);
  return out;
}

Jet2 evaluate_jet(const Field& field, const Eigen::VectorXd& x) {
  return evaluate_jet(field, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

double evaluate_value(const Field& field, const Eigen::VectorXd& x) {
  std::vector<Jet2> vars;
  vars.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) vars.emplace_back(x(i));
  return field(vars).value();
}

}  // namespace stein
