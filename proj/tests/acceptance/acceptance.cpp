// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "stein/convexify.hpp"
#include "stein/criteria.hpp"
#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/riccati.hpp"
#include "stein/sampling.hpp"
#include "stein/selftest.hpp"
#include "stein/worm.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace stein;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Pinned tolerances.
constexpr double kClosedFormRel = 1e-8;
constexpr double kNormalDerivRel = 1e-6;
constexpr double kClosedFormSeconds = 10.0;
constexpr double kCombinedTol = 1e-6;
constexpr double kReciprocalTol = 1e-12;
constexpr double kRiccatiSupTol = 1e-6;
constexpr double kRiccatiResidualTol = 1e-8;
constexpr double kWeightedQTol = 1e-5;
constexpr double kKeylemTol = 1e-5;
constexpr double kLinearPsiTol = 1e-6;
constexpr double kBaselineSeconds = 60.0;
constexpr double kNearSigma = 0.05;
constexpr double kConvexBoundaryTol = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXcd worm_kernel(const BoundaryPoint& p) {
  Eigen::VectorXcd L(2);
  L << 0, std::exp(-I * std::log(p.point.tail(2).squaredNorm()));
  return L;
}

double distance_to_sigma(double beta, const Eigen::VectorXd& x) {
  const RadiusInterval r = worm_sigma_radii(beta);
  const double rw = x.tail(2).norm();
  const double radial = rw < r.lo ? r.lo - rw : (rw > r.hi ? rw - r.hi : 0.0);
  return std::hypot(x.head(2).norm(), radial);
}

std::vector<Eigen::VectorXd> round_shell(const DefiningFunction& rho, Side side) {
  const auto anchors = radial_boundary_samples(rho, Eigen::VectorXd::Zero(2 * rho.n), 256, 1);
  return sample_shell(rho, anchors, {1e-3, 5e-2, 2000, 1}, side);
}

std::vector<Eigen::VectorXd> sigma_shell(const DefiningFunction& worm, std::size_t samples) {
  std::vector<Eigen::VectorXd> anchors;
  for (const auto& p : worm_sigma(worm, 64)) anchors.push_back(p.point);
  return sample_shell(worm, anchors, {1e-4, 1e-2, samples, 1}, Side::Outer);
}

// 1. Worm closed forms at 50 Sigma samples.
Outcome worm_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  const double beta = 0.6 * kPi;
  const auto worm = make_worm(beta);
  double grad_err = 0, ll_err = 0, ln_err = 0, nll_err = 0;
  for (const auto& p : worm_sigma(worm, 50)) {
    const Eigen::VectorXcd L = worm_kernel(p);
    const cplx w(p.point(2), p.point(3));
    grad_err = std::max(grad_err, std::abs(p.grad_norm - 2.0) / 2.0);
    ll_err = std::max(ll_err, std::abs(levi_form(worm, p.point, L, L)));
    const cplx expect = I / w * std::exp(-I * std::log(std::norm(w)));
    ln_err = std::max(ln_err, std::abs(levi_form(worm, p.point, L, p.normal) - expect) / std::abs(expect));
    const double nll = normal_derivative_levi(worm, p, L).derivative;
    nll_err = std::max(nll_err, std::abs(nll + 1.0 / std::norm(w)) * std::norm(w));
  }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << "grad " << grad_err << ", L(L,L) " << ll_err << ", L(L,N) rel " << ln_err << ", NL(L,L) rel " << nll_err
     << ", " << t << " s";
  return {grad_err <= kClosedFormRel && ll_err <= kClosedFormRel && ln_err <= kClosedFormRel &&
              nll_err <= kNormalDerivRel && t < kClosedFormSeconds,
          os.str()};
}

// 2. Combined Sigma quantity.
Outcome combined_zero() {
  double worst = 0;
  for (double beta : {0.6 * kPi, 0.75 * kPi, 1.2 * kPi}) {
    const auto worm = make_worm(beta);
    for (const auto& p : worm_sigma(worm, 50))
      worst = std::max(worst, std::abs(criterion_terms(worm, p, sigma_kernel(p)).combined()));
  }
  return {worst <= kCombinedTol, fmt("max |combined| = %.3e over 150 Sigma samples", worst)};
}

// 3. Index formulas and the reciprocal identity.
Outcome reciprocal_identity() {
  double worst = 0;
  for (int k = 1; k <= 20; ++k) {
    const IndexFormulas f = index_formulas(kPi / 2 + (kPi / 2) * k / 21.0);
    worst = std::max(worst, f.reciprocal() ? std::abs(*f.reciprocal() - 2.0) : INFINITY);
  }
  const IndexFormulas q = index_formulas(0.75 * kPi);
  const double exact = std::max(std::abs(q.steinness - 2.0), std::abs(q.df - 2.0 / 3.0));
  return {worst <= kReciprocalTol && exact <= kReciprocalTol,
          fmt("max |1/df + 1/S - 2| = %.2e", worst) + fmt(", beta = 0.75 pi error %.2e", exact)};
}

// 4. Riccati closed form against RK4 and the equation.
Outcome riccati() {
  const RiccatiCheck a = riccati_check(1, 1, kPi / 2, 1.0, 1.5);
  const RiccatiCheck b = riccati_check(2, 8, kPi / 4, 1.0, 1.2);
  const RiccatiCheck c = riccati_check(1, 1, kPi / 2, 0.7, 1.4);
  const double sup = std::max({a.sup_error, b.sup_error, c.sup_error});
  const double res = std::max({a.ode_residual, b.ode_residual, c.ode_residual});
  return {sup <= kRiccatiSupTol && res <= kRiccatiResidualTol,
          fmt("sup error %.2e", sup) + fmt(", ODE residual %.2e", res)};
}

// 5. Threshold dichotomy for beta = 0.6 pi.
Outcome threshold_dichotomy() {
  const double beta = 0.6 * kPi;
  const RadiusInterval radii = worm_sigma_radii(beta);
  double worst = 0;
  bool ok = true;
  for (double eta2 : {1.3, 1.5, 2.0}) {
    for (double r : {radii.lo, 1.0, radii.hi}) ok = ok && std::isfinite(worm_psi(beta, eta2, r));
    worst = std::max(worst, worm_criterion_verify(beta, eta2, 50));
  }
  int raised = 0;
  for (double eta2 : {1.1, 1.2, 1.25}) {
    try {
      (void)worm_psi(beta, eta2, 1.0);
    } catch (const ThresholdError&) {
      ++raised;
    }
    try {
      (void)worm_criterion_verify(beta, eta2, 5);
    } catch (const ThresholdError&) {
      ++raised;
    }
  }
  return {ok && worst <= kWeightedQTol && raised == 6,
          fmt("max |Q| above threshold %.2e", worst) + ", threshold errors " + std::to_string(raised) + "/6"};
}

// 6. Keylemma residuals.
Outcome keylem() {
  const auto worm = make_worm(0.6 * kPi);
  const auto sigma = worm_sigma(worm, 20);
  double r1 = 0, r2 = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field psi = random_smooth_psi(2, seed);
    for (const auto& p : sigma) {
      const KeylemResiduals r = keylem_residuals(worm, psi, p, sigma_kernel(p));
      r1 = std::max(r1, r.r1);
      r2 = std::max(r2, r.r2);
    }
  }
  return {r1 <= kKeylemTol && r2 <= kKeylemTol, fmt("max r1 %.2e", r1) + fmt(", max r2 %.2e", r2)};
}

// 7. Linear weight gives -(combined).
Outcome linear_weight() {
  double worst = 0;
  const auto ell = make_ellipsoid({2.0, 1.0});
  for (const auto& x : radial_boundary_samples(ell, Eigen::VectorXd::Zero(4), 20, 3)) {
    const BoundaryPoint p = make_boundary_point(ell, x);
    const Eigen::VectorXcd L = p.tangent_frame[0];
    const CriterionSample s = evaluate_criterion(ell, linear_psi(ell, p.point).field(), p, L, 2.0);
    worst = std::max(worst, std::abs(s.Q + s.terms.combined()));
  }
  const auto worm = make_worm(0.6 * kPi);
  for (const auto& p : worm_sigma(worm, 20)) {
    const CriterionSample s = evaluate_criterion(worm, linear_psi(worm, p.point).field(), p, sigma_kernel(p), 2.0);
    worst = std::max(worst, std::abs(s.Q + s.terms.combined()));
  }
  return {worst <= kLinearPsiTol, fmt("max |Q + combined| = %.2e (ellipsoid and worm)", worst)};
}

// 8. Strictly pseudoconvex baselines.
Outcome baselines() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream os;
  for (const auto& rho : {make_ball(2), make_ellipsoid({2.0, 1.0})}) {
    const ExponentEstimate in = df_exponent_lower(rho, round_shell(rho, Side::Inner));
    const ExponentEstimate out = steinness_exponent_upper(rho, round_shell(rho, Side::Outer));
    ok = ok && in.certified && in.eta >= 0.99 && out.certified && out.eta <= 1.01 && in.samples_used == 2000 &&
         out.samples_used == 2000;
    os << rho.name << " inner " << in.eta << " outer " << out.eta << "; ";
  }
  const double t = seconds_since(t0);
  os << t << " s";
  return {ok && t < kBaselineSeconds, os.str()};
}

// 9. Worm beta = 1.2 pi: every grid eta2 <= 4 fails near Sigma.
Outcome worm_noncertification() {
  const double beta = 1.2 * kPi;
  const auto worm = make_worm(beta);
  const auto shell = sigma_shell(worm, 300);
  const EtaGrid grid = EtaGrid::outer_default();
  int failing = 0;
  double worst_distance = 0;
  double largest_margin = -INFINITY;
  for (int k = 0; k < grid.size(); ++k) {
    const MarginResult m = psh_margin(steinness_power_field(worm.field, grid.at(k)), shell);
    largest_margin = std::max(largest_margin, m.min_margin);
    if (m.min_margin < 0.0 && m.witness) {
      ++failing;
      worst_distance = std::max(worst_distance, distance_to_sigma(beta, m.witness->point));
    }
  }
  const ExponentEstimate e = steinness_exponent_upper(worm, shell);
  return {failing == grid.size() && worst_distance <= kNearSigma && !e.certified,
          std::to_string(failing) + "/" + std::to_string(grid.size()) + " grid values fail" +
              fmt(", witness distance to Sigma <= %.2e", worst_distance) +
              fmt(", largest min margin %.2e", largest_margin)};
}

// 10. SSNB constant.
Outcome ssnb() {
  const auto worm = make_worm(1.2 * kPi);
  const SsnbConstant w = ssnb_constant(worm, sigma_shell(worm, 400), worm_sigma(worm, 50));
  const auto worm6 = make_worm(0.6 * kPi);
  const SsnbConstant w6 = ssnb_constant(worm6, sigma_shell(worm6, 400), worm_sigma(worm6, 50));
  const auto ball = make_ball(2);
  const SsnbConstant b = ssnb_constant(ball, round_shell(ball, Side::Outer), {});
  const bool ball_ok = b.c_best > 0.0 && std::isfinite(b.eta2_bound) &&
                       std::abs(b.eta2_bound - (8.0 * b.M / b.c_best + 1.0)) <= 1e-12 * b.eta2_bound;
  return {w.c_best < 0.0 && w6.c_best < 0.0 && ball_ok,
          fmt("worm c_best %.3g", w.c_best) + fmt(" (1.2 pi), %.3g (0.6 pi)", w6.c_best) +
              fmt("; ball c_best %.3g", b.c_best) + fmt(", eta2_bound %.6g", b.eta2_bound)};
}

// 11. Convexification.
Outcome convexification() {
  bool ok = true;
  std::ostringstream os;
  for (const StarBody& body : {make_disc(), make_ellipse(2.0, 1.0)}) {
    const Convexified c = convexify(body, 4);
    const ConvexCertificate cert = certify_convexified(c, 500, 200);
    ok = ok && cert.hessian_points >= 500 && cert.min_hessian_eigenvalue > 0.0 && cert.boundary_points == 200 &&
         cert.max_boundary_abs <= kConvexBoundaryTol && cert.sign_mismatches == 0 && c.value(Eigen::Vector2d::Zero()) < 0.0;
    os << body.name << " min eig " << cert.min_hessian_eigenvalue << " |rho|bd " << cert.max_boundary_abs << "; ";
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3), e(0.01, 1.0);
  int exact = 0, tested = 0;
  while (tested < 10000) {
    const double x = u(rng), y = u(rng), eps = e(rng);
    if (std::abs(x - y) < eps) continue;
    ++tested;
    exact += smooth_max(x, y, {eps}) == std::max(x, y);
  }
  os << "smooth_max exact " << exact << "/" << tested;
  return {ok && exact == tested, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worm closed forms on Sigma", worm_closed_forms},
      {"combined Sigma quantity vanishes", combined_zero},
      {"index formulas and reciprocal identity", reciprocal_identity},
      {"Riccati closed form", riccati},
      {"threshold dichotomy", threshold_dichotomy},
      {"weighted-function identities", keylem},
      {"linear weight", linear_weight},
      {"strictly pseudoconvex baselines", baselines},
      {"worm non-certification", worm_noncertification},
      {"SSNB constant", ssnb},
      {"convexification", convexification},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
