#include "stein/criteria.hpp"

#include "stein/csv.hpp"
#include "stein/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace stein {
namespace {

void require_eta2(double eta2) {
  if (!(eta2 > 1.0)) throw std::invalid_argument("criterion: eta2 must exceed 1, got " + std::to_string(eta2));
}

LeviData field_levi(const Field& f, const Eigen::VectorXd& x) { return complex_parts(evaluate_jet(f, x)); }

}  // namespace

PsiField PsiField::zero() {
  PsiField p;
  p.kind = "none";
  p.re = [](std::span<const Jet2>) { return Jet2(0.0); };
  return p;
}

PsiField PsiField::real(std::string kind, Field f) {
  PsiField p;
  p.kind = std::move(kind);
  p.re = std::move(f);
  return p;
}

CriterionTerms criterion_terms(const DefiningFunction& rho, const BoundaryPoint& p, const Eigen::VectorXcd& L,
                               const CriterionOptions& options) {
  const LeviData data = rho.levi(p.point);
  const double grad = 2.0 * data.holo_grad.norm();
  if (!(grad > 0.0)) throw ConvergenceError("criterion: vanishing gradient");
  const Eigen::VectorXcd N = complex_normal(data);

  CriterionTerms t;
  t.ln_over_grad = hermitian_form(data.mixed_hess, L, N) / grad;
  t.ln_sq_over_grad_sq = std::norm(t.ln_over_grad);
  if (L.norm() == 0.0) return t;
  const DirectionalDerivative nll = normal_derivative_levi(rho, p, L, options.normal_derivative);
  t.nll_over_grad = nll.derivative / grad;
  t.nll_error = nll.error_indicator / grad;
  return t;
}

void add_psi_terms(CriterionTerms& terms, const PsiField& psi, const BoundaryPoint& p, const Eigen::VectorXcd& L) {
  const LeviData re = field_levi(psi.re, p.point);
  cplx l_psi = apply_vector(L, re.holo_grad);
  if (psi.im) {
    const LeviData im = field_levi(*psi.im, p.point);
    l_psi += cplx(0.0, 1.0) * apply_vector(L, im.holo_grad);
  }
  terms.l_psi = l_psi;
  terms.levi_psi = hermitian_form(re.mixed_hess, L, L).real();
}

double criterion_Q(const CriterionTerms& terms, double eta2) {
  require_eta2(eta2);
  return terms.ln_sq_over_grad_sq / (eta2 - 1.0) - 0.5 * terms.nll_over_grad;
}

double criterion_Q(const DefiningFunction& rho, const BoundaryPoint& p, const Eigen::VectorXcd& L, double eta2,
                   const CriterionOptions& options) {
  require_eta2(eta2);
  return criterion_Q(criterion_terms(rho, p, L, options), eta2);
}

double weighted_Q(const CriterionTerms& terms, double eta2) {
  require_eta2(eta2);
  const double alpha = 1.0 / (eta2 - 1.0) + 1.0;
  return alpha * std::norm(terms.ln_over_grad + 0.5 * terms.l_psi) - terms.combined() - 0.25 * terms.levi_psi;
}

double weighted_Q(const DefiningFunction& rho, const PsiField& psi, const BoundaryPoint& p,
                  const Eigen::VectorXcd& L, double eta2, const CriterionOptions& options) {
  require_eta2(eta2);
  CriterionTerms terms = criterion_terms(rho, p, L, options);
  add_psi_terms(terms, psi, p, L);
  return weighted_Q(terms, eta2);
}

CriterionSample evaluate_criterion(const DefiningFunction& rho, const PsiField& psi, const BoundaryPoint& p,
                                   const Eigen::VectorXcd& L, double eta2, const CriterionOptions& options) {
  require_eta2(eta2);
  CriterionSample s;
  s.point = p;
  s.L = L;
  s.eta2 = eta2;
  s.psi_kind = psi.kind;
  s.terms = criterion_terms(rho, p, L, options);
  if (psi.kind == "none") {
    s.Q = criterion_Q(s.terms, eta2);
  } else {
    add_psi_terms(s.terms, psi, p, L);
    s.Q = weighted_Q(s.terms, eta2);
  }
  return s;
}

KeylemResiduals keylem_residuals(const DefiningFunction& rho, const Field& psi, const BoundaryPoint& p,
                                 const Eigen::VectorXcd& L, const CriterionOptions& options) {
  const DefiningFunction weighted = weight(rho, psi);
  const BoundaryPoint pw = make_boundary_point(weighted, p.point);
  const LeviData wdata = weighted.levi(p.point);
  const double wgrad = 2.0 * wdata.holo_grad.norm();

  CriterionTerms base = criterion_terms(rho, p, L, options);
  add_psi_terms(base, PsiField::real("psi", psi), p, L);

  const cplx lhs1 = hermitian_form(wdata.mixed_hess, L, complex_normal(wdata)) / wgrad;
  const cplx rhs1 = base.ln_over_grad + 0.5 * base.l_psi;

  double lhs2 = 0.0;
  if (L.norm() != 0.0) lhs2 = normal_derivative_levi(weighted, pw, L, options.normal_derivative).derivative / wgrad;
  const double rhs2 = base.nll_over_grad + 0.5 * base.levi_psi - 0.5 * std::norm(base.l_psi) -
                      2.0 * (base.ln_over_grad * std::conj(base.l_psi)).real();

  return {std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)};
}

PsiField LinearPsi::field() const {
  PsiField p;
  p.kind = "linear";
  const Eigen::VectorXcd b = coefficients;
  p.re = [b](std::span<const Jet2> v) {
    Jet2 s(0.0);
    for (Eigen::Index j = 0; j < b.size(); ++j)
      s += Jet2(b(j).real()) * v[2 * j] - Jet2(b(j).imag()) * v[2 * j + 1];
    return s;
  };
  p.im = [b](std::span<const Jet2> v) {
    Jet2 s(0.0);
    for (Eigen::Index j = 0; j < b.size(); ++j)
      s += Jet2(b(j).real()) * v[2 * j + 1] + Jet2(b(j).imag()) * v[2 * j];
    return s;
  };
  return p;
}

LinearPsi linear_psi(const DefiningFunction& rho, const Eigen::VectorXd& p0) {
  const LeviData data = rho.levi(p0);
  const double s = data.holo_grad.norm();
  if (!(s > 0.0)) throw ConvergenceError("linear_psi: vanishing gradient");
  const double grad = 2.0 * s;
  LinearPsi out;
  out.coefficients = (-2.0 / (s * grad)) * (data.mixed_hess * data.holo_grad);
  return out;
}

nlohmann::json to_json(const BoundaryPoint& p) {
  auto complex_list = [](const Eigen::VectorXcd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
  };
  nlohmann::json j;
  j["point"] = std::vector<double>(p.point.data(), p.point.data() + p.point.size());
  j["rho"] = p.rho_value;
  j["grad_norm"] = p.grad_norm;
  j["normal"] = complex_list(p.normal);
  j["tangent_frame"] = nlohmann::json::array();
  for (const auto& t : p.tangent_frame) j["tangent_frame"].push_back(complex_list(t));
  j["classification"] = {{"kind", to_string(p.classification.kind)},
                         {"lambda_min", p.classification.lambda_min},
                         {"kernel_dim", p.classification.kernel.size()}};
  return j;
}

nlohmann::json to_json(const CriterionSample& s) {
  nlohmann::json j;
  j["point"] = to_json(s.point);
  j["eta2"] = s.eta2;
  j["Q"] = s.Q;
  j["psi_kind"] = s.psi_kind;
  j["terms"] = {{"ln_sq_over_grad_sq", s.terms.ln_sq_over_grad_sq},
                {"nll_over_grad", s.terms.nll_over_grad},
                {"nll_error", s.terms.nll_error},
                {"l_psi", {s.terms.l_psi.real(), s.terms.l_psi.imag()}},
                {"levi_psi", s.terms.levi_psi}};
  return j;
}

void write_criterion_csv_header(std::ostream& out, int n) {
  for (int j = 1; j <= n; ++j) out << "re_z" << j << ",im_z" << j << ",";
  out << "abs_w,eta2,Q,term_LN,term_NLL,psi_kind\n";
}

void write_criterion_csv_row(std::ostream& out, const CriterionSample& s) {
  const Eigen::VectorXd& x = s.point.point;
  for (Eigen::Index i = 0; i < x.size(); ++i) out << csv_number(x(i)) << ",";
  const Eigen::Index last = x.size() - 2;
  out << csv_number(std::hypot(x(last), x(last + 1))) << "," << csv_number(s.eta2) << "," << csv_number(s.Q) << ","
      << csv_number(s.terms.ln_sq_over_grad_sq) << "," << csv_number(s.terms.nll_over_grad) << "," << s.psi_kind
      << "\n";
}

}  // namespace stein
