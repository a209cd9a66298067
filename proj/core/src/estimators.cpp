#include "stein/estimators.hpp"

#include "stein/csv.hpp"
#include "stein/errors.hpp"
#include "stein/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace stein {
namespace {

struct PointMargin {
  double eigenvalue = 0.0;
  Eigen::VectorXcd eigenvector;
};

PointMargin point_margin(const Field& field, const Eigen::VectorXd& x) {
  const LeviData data = complex_parts(evaluate_jet(field, x));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(data.mixed_hess);
  return {eig.eigenvalues()(0), eig.eigenvectors().col(0)};
}

struct Probe {
  MarginResult margins;
  bool certified = false;
};

Probe probe(const Field& field, const std::vector<Eigen::VectorXd>& shell) {
  Probe p;
  p.margins = psh_margin(field, shell);
  p.certified = p.margins.min_margin > kMarginFloor;
  return p;
}

ExponentEstimate make_estimate(Side side, double eta, const Probe& p, const std::vector<Eigen::VectorXd>& shell,
                               const DefiningFunction& rho) {
  ExponentEstimate e;
  e.side = side;
  e.eta = eta;
  e.certified = p.certified;
  e.min_margin = p.margins.min_margin;
  e.witness = p.margins.witness;
  e.samples_used = shell.size();
  e.margins = p.margins.margins;
  e.depth_min = std::numeric_limits<double>::infinity();
  e.depth_max = 0.0;
  for (const auto& x : shell) {
    const double d = std::abs(rho.value(x));
    e.depth_min = std::min(e.depth_min, d);
    e.depth_max = std::max(e.depth_max, d);
  }
  return e;
}

}  // namespace

MarginResult psh_margin(const Field& field, const std::vector<Eigen::VectorXd>& points) {
  const auto per_point = parallel_map(points.size(), [&](std::size_t i) { return point_margin(field, points[i]); });
  MarginResult out;
  out.margins.reserve(points.size());
  std::size_t worst = 0;
  for (std::size_t i = 0; i < per_point.size(); ++i) {
    out.margins.push_back(per_point[i].eigenvalue);
    if (per_point[i].eigenvalue < out.min_margin) {
      out.min_margin = per_point[i].eigenvalue;
      worst = i;
    }
  }
  if (!points.empty()) out.witness = Witness{points[worst], per_point[worst].eigenvector, per_point[worst].eigenvalue};
  return out;
}

int EtaGrid::size() const {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("EtaGrid: need step > 0 and hi >= lo");
  return static_cast<int>(std::llround((hi - lo) / step)) + 1;
}

double EtaGrid::at(int k) const { return k == size() - 1 ? hi : lo + step * k; }

Field df_power_field(const Field& rho, double eta) {
  return [rho, eta](std::span<const Jet2> v) { return -pow(-rho(v), eta); };
}

Field steinness_power_field(const Field& rho, double eta) {
  return [rho, eta](std::span<const Jet2> v) { return pow(rho(v), eta); };
}

ExponentEstimate df_exponent_lower(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& shell,
                                   const EtaGrid& grid) {
  if (!(grid.lo > 0.0) || !(grid.hi < 1.0)) throw std::invalid_argument("df_exponent_lower: grid must lie in (0, 1)");
  const int top = grid.size() - 1;
  auto run = [&](int k) { return probe(df_power_field(rho.field, grid.at(k)), shell); };

  Probe best = run(top);
  if (best.certified) return make_estimate(Side::Inner, grid.at(top), best, shell, rho);
  Probe low = run(0);
  if (!low.certified) return make_estimate(Side::Inner, grid.at(0), low, shell, rho);

  // Invariant: k_ok certified, k_bad not.
  int k_ok = 0;
  int k_bad = top;
  best = std::move(low);
  while (k_bad - k_ok > 1) {
    const int mid = k_ok + (k_bad - k_ok) / 2;
    Probe p = run(mid);
    if (p.certified) {
      k_ok = mid;
      best = std::move(p);
    } else {
      k_bad = mid;
    }
  }
  return make_estimate(Side::Inner, grid.at(k_ok), best, shell, rho);
}

ExponentEstimate steinness_exponent_upper(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& shell,
                                          const EtaGrid& grid) {
  if (!(grid.lo > 1.0)) throw std::invalid_argument("steinness_exponent_upper: grid must lie above 1");
  const int top = grid.size() - 1;
  auto run = [&](int k) { return probe(steinness_power_field(rho.field, grid.at(k)), shell); };

  Probe best = run(0);
  if (best.certified) return make_estimate(Side::Outer, grid.at(0), best, shell, rho);
  Probe high = run(top);
  if (!high.certified) return make_estimate(Side::Outer, grid.at(top), high, shell, rho);

  // Invariant: k_ok certified, k_bad not.
  int k_bad = 0;
  int k_ok = top;
  best = std::move(high);
  while (k_ok - k_bad > 1) {
    const int mid = k_bad + (k_ok - k_bad) / 2;
    Probe p = run(mid);
    if (p.certified) {
      k_ok = mid;
      best = std::move(p);
    } else {
      k_bad = mid;
    }
  }
  return make_estimate(Side::Outer, grid.at(k_ok), best, shell, rho);
}

double determinant_condition(const DefiningFunction& rho, const Eigen::VectorXd& z, const Eigen::VectorXcd& L,
                             double eta2) {
  const LeviData data = rho.levi(z);
  if (!(data.value > 0.0)) throw std::invalid_argument("determinant_condition: point is not strictly outside");
  const Eigen::VectorXcd N = complex_normal(data);
  const double n_rho_sq = data.holo_grad.squaredNorm();  // |N rho|^2
  const double normal_term = hermitian_form(data.mixed_hess, N, N).real() + (eta2 - 1.0) / data.value * n_rho_sq;
  const Eigen::VectorXcd Lz = extend_tangent(L, data);
  if (Lz.norm() < 1e-12) return -normal_term;
  const double ll = hermitian_form(data.mixed_hess, Lz, Lz).real();
  const double ln_sq = std::norm(hermitian_form(data.mixed_hess, Lz, N));
  return ln_sq - ll * normal_term;
}

SsnbConstant ssnb_constant(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& outer_points,
                           const std::vector<BoundaryPoint>& sigma_points) {
  SsnbConstant out;
  const auto ratios = parallel_map(outer_points.size(), [&](std::size_t i) {
    const LeviData data = rho.levi(outer_points[i]);
    if (!(data.value > 0.0)) throw std::invalid_argument("ssnb_constant: outer point with rho <= 0");
    const Classification c = classify(data);
    // Frame vectors have unit coefficients, i.e. g(L, L) = 1/2.
    return c.lambda_min / (0.5 * data.value);
  });
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] < out.c_best) {
      out.c_best = ratios[i];
      out.worst_point = outer_points[i];
    }
  }
  for (const auto& p : sigma_points) {
    const LeviData data = rho.levi(p.point);
    const double grad = 2.0 * data.holo_grad.norm();
    const Eigen::VectorXcd N = complex_normal(data);
    for (const auto& L : p.classification.kernel)
      out.M = std::max(out.M, std::norm(hermitian_form(data.mixed_hess, L, N)) / (grad * grad));
  }
  out.eta2_bound = out.c_best > 0.0 ? 8.0 * out.M / out.c_best + 1.0 : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

nlohmann::json real_list(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json number_or_inf(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json to_json(const ExponentEstimate& e) {
  nlohmann::json j;
  j["side"] = to_string(e.side);
  j["eta"] = e.eta;
  j["certified"] = e.certified;
  j["min_margin"] = e.min_margin;
  j["samples_used"] = e.samples_used;
  j["shell"] = {e.depth_min, e.depth_max};
  if (e.witness) {
    nlohmann::json ev = nlohmann::json::array();
    for (Eigen::Index i = 0; i < e.witness->eigenvector.size(); ++i)
      ev.push_back({e.witness->eigenvector(i).real(), e.witness->eigenvector(i).imag()});
    j["witness"] = {{"point", real_list(e.witness->point)}, {"eigenvalue", e.witness->eigenvalue}, {"eigenvector", ev}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const SsnbConstant& c) {
  nlohmann::json j;
  j["c_best"] = number_or_inf(c.c_best);
  j["M"] = c.M;
  j["eta2_bound"] = number_or_inf(c.eta2_bound);
  j["worst_point"] = real_list(c.worst_point);
  return j;
}

void write_margin_csv(std::ostream& out, const std::vector<Eigen::VectorXd>& points, const std::vector<double>& margins) {
  if (points.empty()) return;
  out << "index";
  for (Eigen::Index i = 0; i < points.front().size(); ++i) out << ",x" << i;
  out << ",margin\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < points[k].size(); ++i) out << "," << csv_number(points[k](i));
    out << "," << csv_number(margins[k]) << "\n";
  }
}

}  // namespace stein
