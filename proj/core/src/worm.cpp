#include "stein/worm.hpp"

#include "stein/errors.hpp"
#include "stein/csv.hpp"
#include "stein/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stein {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThresholdGuard = 1e-12;

double alpha_of(double eta2) { return 1.0 / (eta2 - 1.0) + 1.0; }

void require_beta(double beta) {
  if (!(beta > kPi / 2.0)) throw std::invalid_argument("worm: beta must exceed pi/2");
}

void require_threshold(double beta, double eta2) {
  if (!threshold_check(beta, eta2))
    throw ThresholdError("eta2 = " + std::to_string(eta2) + " is not above the threshold pi/(2(pi - beta)) = " +
                             std::to_string(worm_threshold(beta)),
                         worm_threshold(beta));
}

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return "inf";
}

}  // namespace

RadiusInterval worm_sigma_radii(double beta) {
  require_beta(beta);
  const double h = beta / 2.0 - kPi / 4.0;
  return {std::exp(-h), std::exp(h)};
}

bool worm_in_sigma(double beta, const Eigen::VectorXd& x, double tol) {
  if (x.size() != 4) throw std::invalid_argument("worm_in_sigma: expected a point of C^2");
  const double w2 = x(2) * x(2) + x(3) * x(3);
  if (w2 == 0.0) return false;
  return std::hypot(x(0), x(1)) <= tol && std::abs(std::log(w2)) <= beta - kPi / 2.0 + tol;
}

std::vector<BoundaryPoint> worm_sigma(const DefiningFunction& worm, int m) {
  if (m < 1) throw std::invalid_argument("worm_sigma: need m >= 1");
  const double beta = worm.params.at("beta").get<double>();
  const RadiusInterval radii = worm_sigma_radii(beta);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  return parallel_map(static_cast<std::size_t>(m), [&](std::size_t k) {
    const double r = m == 1 ? 1.0 : radii.lo + (radii.hi - radii.lo) * static_cast<double>(k) / (m - 1);
    const double theta = golden * static_cast<double>(k);
    Eigen::VectorXd x(4);
    x << 0.0, 0.0, r * std::cos(theta), r * std::sin(theta);
    return make_boundary_point(worm, x);
  });
}

std::vector<BoundaryPoint> worm_sigma(double beta, int m) { return worm_sigma(make_worm(beta), m); }

double worm_threshold(double beta) {
  require_beta(beta);
  if (beta >= kPi) return std::numeric_limits<double>::infinity();
  return kPi / (2.0 * (kPi - beta));
}

bool threshold_check(double beta, double eta2) {
  const double threshold = worm_threshold(beta);
  if (!std::isfinite(threshold)) return false;
  return eta2 > threshold * (1.0 + kThresholdGuard);
}

std::optional<double> IndexFormulas::reciprocal() const {
  if (!std::isfinite(steinness)) return std::nullopt;
  return 1.0 / df + 1.0 / steinness;
}

IndexFormulas index_formulas(double beta) { return {kPi / (2.0 * beta), worm_threshold(beta)}; }

double worm_psi_profile(double alpha, double r) {
  if (!(r > 0.0)) throw DomainError("log", "worm_psi: r must be positive");
  const double c = std::cos(2.0 * alpha * std::log(r));
  if (!(c > 0.0)) throw DomainError("log", "worm_psi: cos(2 alpha log r) <= 0");
  return -std::log(c) / alpha;
}

double worm_psi(double beta, double eta2, double r) {
  require_threshold(beta, eta2);
  const RadiusInterval radii = worm_sigma_radii(beta);
  const double slack = 1e-12 * radii.hi;
  if (!(r >= radii.lo - slack && r <= radii.hi + slack))
    throw DomainError("worm_psi", "r = " + std::to_string(r) + " outside the Sigma radii");
  return worm_psi_profile(alpha_of(eta2), r);
}

Field worm_psi_field(double beta, double eta2) {
  require_threshold(beta, eta2);
  const double alpha = alpha_of(eta2);
  return [alpha](std::span<const Jet2> v) {
    if (v.size() != 4) throw std::invalid_argument("worm_psi_field: expected a point of C^2");
    // 2 alpha log r = alpha log |w|^2.
    return Jet2(-1.0 / alpha) * log(cos(alpha * log(abs2(v[2], v[3]))));
  };
}

const Eigen::VectorXcd& sigma_kernel(const BoundaryPoint& p) {
  if (p.classification.kernel.empty())
    throw std::runtime_error("sigma_kernel: no Levi kernel at a point expected to be weakly pseudoconvex");
  return p.classification.kernel.front();
}

double worm_criterion_verify(double beta, double eta2, int m, const CriterionOptions& options) {
  require_threshold(beta, eta2);
  const DefiningFunction worm = make_worm(beta);
  const PsiField psi = PsiField::real("riccati", worm_psi_field(beta, eta2));
  const auto sigma = worm_sigma(worm, m);
  const auto q = parallel_map(sigma.size(), [&](std::size_t k) {
    return weighted_Q(worm, psi, sigma[k], sigma_kernel(sigma[k]), eta2, options);
  });
  double worst = 0.0;
  for (double v : q) worst = std::max(worst, std::abs(v));
  return worst;
}

WormReport worm_report(double beta, const WormReportOptions& options) {
  WormReport r;
  r.beta = beta;
  r.formulas = index_formulas(beta);
  r.threshold = worm_threshold(beta);
  r.above_threshold = threshold_check(beta, options.eta2);

  const DefiningFunction worm = make_worm(beta);
  r.sigma_samples = worm_sigma(worm, options.sigma_samples);

  bool use_psi = false;
  if (options.psi == "riccati") {
    require_threshold(beta, options.eta2);
    use_psi = true;
  } else if (options.psi == "auto") {
    use_psi = r.above_threshold;
  } else if (options.psi != "none") {
    throw std::invalid_argument("worm_report: psi must be riccati, none or auto");
  }
  const PsiField psi = use_psi ? PsiField::real("riccati", worm_psi_field(beta, options.eta2)) : PsiField::zero();

  r.criterion_rows = parallel_map(r.sigma_samples.size(), [&](std::size_t k) {
    const BoundaryPoint& p = r.sigma_samples[k];
    return evaluate_criterion(worm, psi, p, sigma_kernel(p), options.eta2, options.criterion);
  });
  for (const auto& row : r.criterion_rows) {
    r.max_abs_Q = std::max(r.max_abs_Q, std::abs(row.Q));
    r.max_abs_combined = std::max(r.max_abs_combined, std::abs(row.terms.combined()));
  }
  return r;
}

nlohmann::json to_json(const WormReport& r) {
  nlohmann::json j;
  j["beta"] = r.beta;
  j["df_formula"] = r.formulas.df;
  j["steinness_formula"] = finite_or_string(r.formulas.steinness);
  const auto rc = r.formulas.reciprocal();
  j["reciprocal_check"] = rc ? nlohmann::json(*rc) : nlohmann::json(nullptr);
  j["threshold"] = finite_or_string(r.threshold);
  j["above_threshold"] = r.above_threshold;
  j["max_abs_Q"] = r.max_abs_Q;
  j["max_abs_combined"] = r.max_abs_combined;
  j["sigma_samples"] = nlohmann::json::array();
  for (const auto& p : r.sigma_samples) j["sigma_samples"].push_back(to_json(p));
  j["criterion_rows"] = nlohmann::json::array();
  for (const auto& row : r.criterion_rows) j["criterion_rows"].push_back(to_json(row));
  return j;
}

void write_beta_sweep_csv(std::ostream& out, const std::vector<double>& betas) {
  out << "beta,df_formula,steinness_formula,reciprocal_check\n";
  for (double beta : betas) {
    const IndexFormulas f = index_formulas(beta);
    const auto rc = f.reciprocal();
    out << csv_number(beta) << "," << csv_number(f.df) << ","
        << (std::isfinite(f.steinness) ? csv_number(f.steinness) : std::string("inf")) << ","
        << (rc ? csv_number(*rc) : std::string()) << "\n";
  }
}

}  // namespace stein
