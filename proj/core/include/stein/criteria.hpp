#pragma once

// Boundary criteria on the weakly pseudoconvex set.
//
// All quantities use the complex normal N = N_rho, a (1,0) tangent vector L
// at a boundary point p (extended off the boundary so that L rho = 0), and
// |grad rho| the Euclidean norm of the real gradient at p:
//
//   LN   = L_rho(L, N) / |grad rho|
//   NLL  = N L_rho(L, L) / |grad rho|
//   Q    = |LN|^2 / (eta2 - 1) - NLL / 2                     (Steinness criterion)
//   Qpsi = (1/(eta2-1) + 1) |LN + (L psi)/2|^2 - (|LN|^2 + NLL/2) - L_psi(L, L)/4

#include "stein/domains.hpp"
#include "stein/geometry.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace stein {

/// A possibly complex valued weight psi = re + i im. Only `re` is used when
/// the weight multiplies a defining function.
struct PsiField {
  std::string kind = "none";
  Field re;
  std::optional<Field> im;

  static PsiField zero();
  static PsiField real(std::string kind, Field f);
};

struct CriterionTerms {
  cplx ln_over_grad;         ///< L_rho(L, N) / |grad rho|
  double ln_sq_over_grad_sq = 0.0;  ///< |L_rho(L, N)|^2 / |grad rho|^2
  double nll_over_grad = 0.0;       ///< N L_rho(L, L) / |grad rho|
  double nll_error = 0.0;           ///< Richardson indicator of the NLL estimate
  cplx l_psi;                ///< L psi
  double levi_psi = 0.0;     ///< Re L_psi(L, L)

  /// |LN|^2 + NLL / 2, which vanishes identically on the worm's Sigma.
  double combined() const { return ln_sq_over_grad_sq + 0.5 * nll_over_grad; }
};

struct CriterionSample {
  BoundaryPoint point;
  Eigen::VectorXcd L;
  double eta2 = 0.0;
  double Q = 0.0;
  CriterionTerms terms;
  std::string psi_kind = "none";
};

struct CriterionOptions {
  NormalDerivativeOptions normal_derivative;
};

/// Evaluates the rho-only terms at p for the tangent vector L.
CriterionTerms criterion_terms(const DefiningFunction& rho, const BoundaryPoint& p, const Eigen::VectorXcd& L,
                               const CriterionOptions& options = {});

/// Adds the psi terms L psi and L_psi(L, L) at p.
void add_psi_terms(CriterionTerms& terms, const PsiField& psi, const BoundaryPoint& p, const Eigen::VectorXcd& L);

/// The Steinness criterion at p; it holds iff the result is <= 0.
/// Throws std::invalid_argument for eta2 <= 1.
double criterion_Q(const DefiningFunction& rho, const BoundaryPoint& p, const Eigen::VectorXcd& L, double eta2,
                   const CriterionOptions& options = {});
double criterion_Q(const CriterionTerms& terms, double eta2);

/// The weighted criterion with a weight psi; equals criterion_Q for psi = 0.
double weighted_Q(const DefiningFunction& rho, const PsiField& psi, const BoundaryPoint& p,
                  const Eigen::VectorXcd& L, double eta2, const CriterionOptions& options = {});
double weighted_Q(const CriterionTerms& terms, double eta2);

CriterionSample evaluate_criterion(const DefiningFunction& rho, const PsiField& psi, const BoundaryPoint& p,
                                   const Eigen::VectorXcd& L, double eta2, const CriterionOptions& options = {});

struct KeylemResiduals {
  double r1 = 0.0;  ///< first-order identity for L_rho~(L~, N~) / |grad rho~|
  double r2 = 0.0;  ///< second-order identity for N~ L_rho~(L~, L~) / |grad rho~|
};

/// Residuals of the two identities relating rho and rho~ = rho exp(psi) at a
/// weakly pseudoconvex p with L in the Levi kernel. Left sides are computed
/// from rho~ directly; right sides from rho and psi.
KeylemResiduals keylem_residuals(const DefiningFunction& rho, const Field& psi, const BoundaryPoint& p,
                                 const Eigen::VectorXcd& L, const CriterionOptions& options = {});

/// The holomorphic linear weight psi(z) = sum_j b_j z_j with
/// b_j = -2 (sum_k H_jk d rho/d z_k) / (s |grad rho|), s = |d rho|,
/// so that L psi(p0) = -2 L_rho(L, N)(p0) / |grad rho| for every tangent L.
struct LinearPsi {
  Eigen::VectorXcd coefficients;
  PsiField field() const;
};

LinearPsi linear_psi(const DefiningFunction& rho, const Eigen::VectorXd& p0);

nlohmann::json to_json(const BoundaryPoint& p);
nlohmann::json to_json(const CriterionSample& sample);

/// Stable CSV layout:
///   re_z1,im_z1,...,re_zn,im_zn,abs_w,eta2,Q,term_LN,term_NLL,psi_kind
/// term_LN = |L_rho(L,N)|^2/|grad rho|^2, term_NLL = N L_rho(L,L)/|grad rho|, abs_w = |z_n|.
void write_criterion_csv_header(std::ostream& out, int n);
void write_criterion_csv_row(std::ostream& out, const CriterionSample& sample);

}  // namespace stein
