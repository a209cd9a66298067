#include "stein/convexify.hpp"

#include "stein/errors.hpp"
#include "stein/parallel.hpp"
#include "stein/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stein {

double SmoothMaxProfile::chi(double t) const {
  const double a = std::abs(t);
  if (a >= epsilon) return a;
  const double u2 = (t / epsilon) * (t / epsilon);
  // The polynomial touches |t| to second order at the band edge; rounding can dip below it.
  return std::max(a, 5.0 * epsilon / 16.0 + epsilon * (15.0 / 8.0) * (u2 / 2.0 - u2 * u2 / 6.0 + u2 * u2 * u2 / 30.0));
}

double SmoothMaxProfile::d1(double t) const {
  if (std::abs(t) >= epsilon) return t > 0.0 ? 1.0 : -1.0;
  const double u = t / epsilon;
  const double u2 = u * u;
  return (15.0 / 8.0) * u * (1.0 - 2.0 * u2 / 3.0 + u2 * u2 / 5.0);
}

double SmoothMaxProfile::d2(double t) const {
  if (std::abs(t) >= epsilon) return 0.0;
  const double w = 1.0 - (t / epsilon) * (t / epsilon);
  return 15.0 / (8.0 * epsilon) * w * w;
}

double smooth_max(double x, double y, const SmoothMaxProfile& profile) {
  const double d = x - y;
  if (std::abs(d) >= profile.epsilon) return d > 0.0 ? x : y;
  return 0.5 * (x + y + profile.chi(d));
}

Jet2 smooth_max(const Jet2& x, const Jet2& y, const SmoothMaxProfile& profile) {
  const Jet2 d = x - y;
  const double t = d.value();
  if (std::abs(t) >= profile.epsilon) return t > 0.0 ? x : y;
  return Jet2(0.5) * (x + y + chain(d, profile.chi(t), profile.d1(t), profile.d2(t)));
}

// ---------------------------------------------------------------------------
// Bodies

double StarBody::radius(const Eigen::VectorXd& u) const { return evaluate_value(radial, u); }

Eigen::VectorXd StarBody::boundary_point(const Eigen::VectorXd& u) const { return radius(u) * u; }

StarBody make_ellipsoid_body(const std::vector<double>& axes) {
  const int n = static_cast<int>(axes.size());
  if (n != 2 && n != 4) throw std::invalid_argument("make_ellipsoid_body: bodies live in R^2 or R^4");
  for (double a : axes)
    if (!(a > 0.0)) throw std::invalid_argument("make_ellipsoid_body: semi-axes must be positive");
  StarBody b;
  b.name = "ellipsoid";
  b.n_real = n;
  b.params = {{"axes", axes}};
  b.radial = [axes](std::span<const Jet2> u) {
    Jet2 s(0.0);
    for (std::size_t i = 0; i < axes.size(); ++i) s += square(u[i]) / Jet2(axes[i] * axes[i]);
    return Jet2(1.0) / sqrt(s);
  };
  return b;
}

StarBody make_disc(double radius, int n_real) {
  StarBody b = make_ellipsoid_body(std::vector<double>(static_cast<std::size_t>(n_real), radius));
  b.name = "disc";
  return b;
}

StarBody make_ellipse(double a, double b) {
  StarBody body = make_ellipsoid_body({a, b});
  body.name = "ellipse";
  return body;
}

Field minkowski_field(const StarBody& body) {
  const Field radial = body.radial;
  return [radial](std::span<const Jet2> v) {
    Jet2 r2(0.0);
    for (const auto& c : v) r2 += square(c);
    if (r2.value() == 0.0) return Jet2(-1.0);
    const Jet2 norm = sqrt(r2);
    std::vector<Jet2> u;
    u.reserve(v.size());
    for (const auto& c : v) u.push_back(c / norm);
    return norm / radial(u) - Jet2(1.0);
  };
}

double minkowski_sigma(const StarBody& body, const Eigen::VectorXd& x) {
  const double len = x.norm();
  if (len == 0.0) return -1.0;
  return len / body.radius(x / len) - 1.0;
}

Eigen::VectorXd boundary_normal(const StarBody& body, const Eigen::VectorXd& u) {
  const Eigen::VectorXd g = evaluate_jet(minkowski_field(body), body.boundary_point(u)).grad();
  return g / g.norm();
}

std::vector<Eigen::VectorXd> body_boundary_samples(const StarBody& body, std::size_t count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  if (body.n_real == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      dirs.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
  } else {
    LowDiscrepancySequence seq(body.n_real, seed);
    for (std::size_t k = 0; k < count; ++k) dirs.push_back(to_unit_sphere(seq.next()));
  }
  return parallel_map(count, [&](std::size_t k) { return Eigen::VectorXd(body.boundary_point(dirs[k])); });
}

SignedDistance::SignedDistance(const StarBody& body, std::size_t samples) : body_(body) {
  if (body.params.contains("axes")) {
    const auto axes = body.params["axes"].get<std::vector<double>>();
    round_ = std::all_of(axes.begin(), axes.end(), [&](double a) { return a == axes.front(); });
    radius_ = axes.front();
  }
  if (!round_) boundary_ = body_boundary_samples(body, samples);
}

double SignedDistance::operator()(const Eigen::VectorXd& x) const {
  if (round_) return x.norm() - radius_;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boundary_) best = std::min(best, (x - b).squaredNorm());
  const double d = std::sqrt(best);
  return minkowski_sigma(body_, x) < 0.0 ? -d : d;
}

double convexity_defect(const StarBody& body, std::size_t pairs, std::uint64_t seed) {
  LowDiscrepancySequence seq(2 * body.n_real, seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pairs; ++k) {
    const Eigen::VectorXd u = seq.next();
    Eigen::VectorXd a(body.n_real);
    Eigen::VectorXd b(body.n_real);
    if (body.n_real == 2) {
      a << std::cos(2 * std::numbers::pi * u(0)), std::sin(2 * std::numbers::pi * u(0));
      b << std::cos(2 * std::numbers::pi * u(1)), std::sin(2 * std::numbers::pi * u(1));
    } else {
      a = to_unit_sphere(u.head(4));
      b = to_unit_sphere(u.tail(4));
    }
    const Eigen::VectorXd mid = 0.5 * (body.boundary_point(a) + body.boundary_point(b));
    worst = std::max(worst, minkowski_sigma(body, mid));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

constexpr double kConvexityTolerance = 1e-9;

Jet2 norm_sq(std::span<const Jet2> v) {
  Jet2 r2(0.0);
  for (const auto& c : v) r2 += square(c);
  return r2;
}

Jet2 inner_term(const Jet2& sigma, const Jet2& r2, const InnerPiece& p) {
  return smooth_max(sigma, Jet2(p.delta1) * r2 - Jet2(p.delta2), {p.band});
}

Jet2 outer_term(const Jet2& sigma, const Jet2& r2, const OuterPiece& p) {
  return smooth_max(Jet2(0.0), sigma + Jet2(p.delta1) * r2 - Jet2(p.delta2), {p.band});
}

double derivative_sup(const Jet2& j) {
  double c = std::abs(j.value());
  if (j.dim() > 0) c = std::max({c, j.grad().cwiseAbs().maxCoeff(), j.hess().cwiseAbs().maxCoeff()});
  return c;
}

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

double Convexified::value(const Eigen::VectorXd& x) const { return evaluate_value(field, x); }

Convexified convexify(const StarBody& body, int K, const ConvexifyOptions& options) {
  if (K < 2) throw std::invalid_argument("convexify: need K >= 2");
  if (body.n_real != 2 && body.n_real != 4) throw std::invalid_argument("convexify: bodies live in R^2 or R^4");
  const double defect = convexity_defect(body, 2000);
  if (defect > kConvexityTolerance)
    throw ConstructionError("convexify: body failed the sampled convexity check (midpoint sigma = " + fmt(defect) + ")");

  const std::size_t n_boundary = options.boundary_samples ? options.boundary_samples : (body.n_real == 2 ? 4096 : 16384);
  const auto boundary = body_boundary_samples(body, n_boundary, options.seed);
  const auto normals = parallel_map(boundary.size(), [&](std::size_t k) {
    return boundary_normal(body, boundary[k] / boundary[k].norm());
  });
  double M = 0.0;
  double dist0 = std::numeric_limits<double>::infinity();
  for (const auto& b : boundary) {
    M = std::max(M, b.squaredNorm());
    dist0 = std::min(dist0, b.norm());
  }

  Convexified out;
  out.body = body;
  out.K = K;
  out.epsilon0 = std::min(1.0, 0.9 * dist0);
  const Field sigma_field = minkowski_field(body);

  for (int j = 1; j <= K; ++j) {
    const double eps = out.epsilon0 / j;

    InnerPiece in;
    in.epsilon = eps;
    in.M = M;
    in.m = 0.0;
    in.S = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < boundary.size(); ++k)
      in.S = std::max(in.S, minkowski_sigma(body, boundary[k] - eps * normals[k]));
    if (!(in.S < 0.0)) throw ConstructionError("convexify: S_eps = " + fmt(in.S) + " is not negative");
    in.delta1 = -in.S / (2.0 * M);
    const double in_hi = in.delta1 * in.m - in.S;
    in.delta2 = 0.5 * (in.delta1 * M + in_hi);
    if (!(in.delta1 * M < in.delta2 && in.delta2 < in_hi))
      throw ConstructionError("convexify: no delta with d1 M < d2 < d1 m - S at eps = " + fmt(eps));
    in.band = 0.5 * std::min(in.delta2 - in.delta1 * M, in_hi - in.delta2);
    out.inner.push_back(in);

    OuterPiece ou;
    ou.epsilon = eps;
    ou.M = M;
    ou.S = std::numeric_limits<double>::infinity();
    ou.m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      const Eigen::VectorXd y = boundary[k] + eps * normals[k];
      ou.S = std::min(ou.S, minkowski_sigma(body, y));
      ou.m = std::min(ou.m, y.squaredNorm());
    }
    if (!(ou.S > 0.0)) throw ConstructionError("convexify: outer S_eps = " + fmt(ou.S) + " is not positive");
    ou.delta1 = M > ou.m ? std::min(1.0, ou.S / (2.0 * (M - ou.m))) : 1.0;
    const double ou_hi = ou.S + ou.delta1 * ou.m;
    ou.delta2 = 0.5 * (ou.delta1 * M + ou_hi);
    if (!(ou.delta1 * M < ou.delta2 && ou.delta2 < ou_hi))
      throw ConstructionError("convexify: no delta with d1 M < d2 < d1 m + S outside at eps = " + fmt(eps));
    ou.band = 0.5 * std::min(ou.delta2 - ou.delta1 * M, ou_hi - ou.delta2);
    out.outer.push_back(ou);
  }

  // c_j: sampled sup of value, gradient and Hessian entries on {|delta| < j}.
  const SignedDistance delta(body, n_boundary);
  const double box = std::sqrt(M) + K;
  LowDiscrepancySequence seq(body.n_real, options.seed + 1);
  std::vector<Eigen::VectorXd> collar(options.collar_samples);
  for (auto& x : collar) x = box * (2.0 * seq.next().array() - 1.0).matrix();
  const auto depth = parallel_map(collar.size(), [&](std::size_t k) { return delta(collar[k]); });
  for (int j = 1; j <= K; ++j) {
    InnerPiece& in = out.inner[static_cast<std::size_t>(j - 1)];
    OuterPiece& ou = out.outer[static_cast<std::size_t>(j - 1)];
    const auto sups = parallel_map(collar.size(), [&](std::size_t k) -> std::pair<double, double> {
      if (!(std::abs(depth[k]) < j)) return {0.0, 0.0};
      const Eigen::VectorXd& x = collar[k];
      const Jet2 s = evaluate_jet(sigma_field, x);
      std::vector<Jet2> v;
      for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(Jet2::variable(x(i), static_cast<int>(i), static_cast<int>(x.size())));
      const Jet2 r2 = norm_sq(v);
      return {derivative_sup(inner_term(s, r2, in)), derivative_sup(outer_term(s, r2, ou))};
    });
    for (const auto& [a, b] : sups) {
      in.c = std::max(in.c, a);
      ou.c = std::max(ou.c, b);
    }
    // An outer term that vanishes on the whole sampled collar contributes nothing to the sup.
    if (!(in.c > 0.0)) in.c = 1.0;
    if (!(ou.c > 0.0)) ou.c = 1.0;
    in.eta = 1.0 / (std::ldexp(1.0, j) * in.c);
    ou.eta = 1.0 / (std::ldexp(1.0, j) * ou.c);
  }

  const auto inner = out.inner;
  const auto outer = out.outer;
  out.field = [sigma_field, inner, outer](std::span<const Jet2> v) {
    const Jet2 s = sigma_field(v);
    const Jet2 r2 = norm_sq(v);
    Jet2 total(0.0);
    for (const auto& p : inner) total += Jet2(p.eta) * inner_term(s, r2, p);
    for (const auto& p : outer) total += Jet2(p.eta) * outer_term(s, r2, p);
    return total;
  };
  return out;
}

ConvexCertificate certify_convexified(const Convexified& c, std::size_t hessian_points, std::size_t boundary_points,
                                      std::uint64_t seed) {
  ConvexCertificate cert;
  cert.gap = 1.0 / c.K;
  const StarBody& body = c.body;
  const SignedDistance delta(body, body.n_real == 2 ? 4096 : 16384);
  double R = 0.0;
  for (const auto& b : body_boundary_samples(body, 256)) R = std::max(R, b.norm());

  // Candidates in [-3R, 3R]^n; keep those off the collar |delta| <= 1/K.
  LowDiscrepancySequence seq(body.n_real, seed);
  std::vector<Eigen::VectorXd> points;
  std::size_t attempts = 0;
  while (points.size() < hessian_points && attempts < 100 * hessian_points + 100) {
    ++attempts;
    Eigen::VectorXd x = 3.0 * R * (2.0 * seq.next().array() - 1.0).matrix();
    if (std::abs(delta(x)) > cert.gap) points.push_back(std::move(x));
  }
  points.push_back(Eigen::VectorXd::Zero(body.n_real));
  cert.hessian_points = points.size();

  struct Scan {
    double eig = 0.0;
    bool sign_ok = true;
  };
  const auto scans = parallel_map(points.size(), [&](std::size_t k) {
    const Jet2 j = evaluate_jet(c.field, points[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(j.hess()), Eigen::EigenvaluesOnly);
    const double s = minkowski_sigma(body, points[k]);
    return Scan{eig.eigenvalues()(0), (s < 0.0) == (j.value() < 0.0) && (s > 0.0) == (j.value() > 0.0)};
  });
  cert.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scans.size(); ++k) {
    if (scans[k].eig < cert.min_hessian_eigenvalue) {
      cert.min_hessian_eigenvalue = scans[k].eig;
      cert.worst_point = points[k];
    }
    if (!scans[k].sign_ok) ++cert.sign_mismatches;
  }
  cert.sign_points = points.size();

  const auto boundary = body_boundary_samples(body, boundary_points, seed + 17);
  cert.boundary_points = boundary.size();
  for (const auto& b : boundary) cert.max_boundary_abs = std::max(cert.max_boundary_abs, std::abs(c.value(b)));

  cert.passed = cert.min_hessian_eigenvalue > 0.0 && cert.max_boundary_abs <= 1e-8 && cert.sign_mismatches == 0 &&
                points.size() > hessian_points;
  return cert;
}

nlohmann::json to_json(const Convexified& c) {
  nlohmann::json j;
  j["body"] = {{"name", c.body.name}, {"n_real", c.body.n_real}, {"params", c.body.params}};
  j["K"] = c.K;
  j["epsilon0"] = c.epsilon0;
  j["inner"] = nlohmann::json::array();
  for (const auto& p : c.inner)
    j["inner"].push_back({{"epsilon", p.epsilon}, {"S", p.S}, {"M", p.M}, {"m", p.m}, {"delta1", p.delta1},
                          {"delta2", p.delta2}, {"band", p.band}, {"c", p.c}, {"eta", p.eta}});
  j["outer"] = nlohmann::json::array();
  for (const auto& p : c.outer)
    j["outer"].push_back({{"epsilon", p.epsilon}, {"S", p.S}, {"M", p.M}, {"m", p.m}, {"delta1", p.delta1},
                          {"delta2", p.delta2}, {"band", p.band}, {"c", p.c}, {"eta", p.eta}});
  return j;
}

nlohmann::json to_json(const ConvexCertificate& cert) {
  return {{"gap", cert.gap},
          {"hessian_points", cert.hessian_points},
          {"min_hessian_eigenvalue", cert.min_hessian_eigenvalue},
          {"worst_point", std::vector<double>(cert.worst_point.data(), cert.worst_point.data() + cert.worst_point.size())},
          {"boundary_points", cert.boundary_points},
          {"max_boundary_abs", cert.max_boundary_abs},
          {"sign_points", cert.sign_points},
          {"sign_mismatches", cert.sign_mismatches},
          {"passed", cert.passed}};
}

}  // namespace stein
