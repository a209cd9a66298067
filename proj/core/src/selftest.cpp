#include "stein/selftest.hpp"

#include "stein/criteria.hpp"
#include "stein/parallel.hpp"
#include "stein/worm.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace stein {

Field random_smooth_psi(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int d = 2 * n;
  std::vector<double> lin(static_cast<std::size_t>(d));
  std::vector<double> quad(static_cast<std::size_t>(d * d));
  for (auto& v : lin) v = 0.5 * unif(rng);
  for (auto& v : quad) v = 0.2 * unif(rng);
  const double amp = 0.3 * unif(rng);
  const double freq = 1.0 + unif(rng);
  const double phase = std::numbers::pi * unif(rng);
  const int axis = static_cast<int>(std::uniform_int_distribution<int>(0, d - 1)(rng));
  return [=](std::span<const Jet2> v) {
    Jet2 s(0.0);
    for (int i = 0; i < d; ++i) {
      s += Jet2(lin[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(i)];
      for (int j = i; j < d; ++j) s += Jet2(quad[static_cast<std::size_t>(i * d + j)]) * v[i] * v[j];
    }
    return s + Jet2(amp) * sin(Jet2(freq) * v[static_cast<std::size_t>(axis)] + Jet2(phase));
  };
}

FiniteDifferenceReport ad_fd_consistency(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& points,
                                         double step) {
  FiniteDifferenceReport r;
  r.domain = rho.name;
  r.points = static_cast<int>(points.size());
  const auto errs = parallel_map(points.size(), [&](std::size_t k) -> std::pair<double, double> {
    const Eigen::VectorXd& x = points[k];
    const Jet2 j = rho.jet(x);
    double g = 0.0;
    double h = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(i) += step;
      xm(i) -= step;
      const double fd = (rho.value(xp) - rho.value(xm)) / (2 * step);
      g = std::max(g, std::abs(j.grad()(i) - fd) / std::max(1.0, std::abs(j.grad()(i))));
      const Eigen::VectorXd gd = (rho.jet(xp).grad() - rho.jet(xm).grad()) / (2 * step);
      for (Eigen::Index l = 0; l < x.size(); ++l)
        h = std::max(h, std::abs(j.hess()(l, i) - gd(l)) / std::max(1.0, std::abs(j.hess()(l, i))));
    }
    return {g, h};
  });
  for (const auto& [g, h] : errs) {
    r.grad_rel = std::max(r.grad_rel, g);
    r.hess_rel = std::max(r.hess_rel, h);
  }
  return r;
}

std::vector<Eigen::VectorXd> random_region_points(const DefiningFunction& rho, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const bool worm = rho.name == "worm";
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(2 * rho.n);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
    if (worm) {
      const double r = radius(rng);
      const double a = angle(rng);
      x(2) = r * std::cos(a);
      x(3) = r * std::sin(a);
    }
    out.push_back(x);
  }
  return out;
}

bool SelftestReport::passed() const {
  if (keylem_r1 > keylem_tolerance || keylem_r2 > keylem_tolerance) return false;
  for (const auto& f : finite_differences)
    if (f.grad_rel > fd_tolerance || f.hess_rel > fd_tolerance) return false;
  return true;
}

SelftestReport run_selftest(std::uint64_t seed, int psi_count, int sigma_points, int fd_points) {
  SelftestReport r;
  r.psi_count = psi_count;
  r.sigma_points = sigma_points;

  const DefiningFunction worm = make_worm(0.6 * std::numbers::pi);
  const auto sigma = worm_sigma(worm, sigma_points);
  for (int k = 0; k < psi_count; ++k) {
    const Field psi = random_smooth_psi(2, seed + static_cast<std::uint64_t>(k));
    const auto res = parallel_map(sigma.size(), [&](std::size_t i) {
      return keylem_residuals(worm, psi, sigma[i], sigma_kernel(sigma[i]));
    });
    for (const auto& v : res) {
      r.keylem_r1 = std::max(r.keylem_r1, v.r1);
      r.keylem_r2 = std::max(r.keylem_r2, v.r2);
    }
  }

  const std::vector<DefiningFunction> builtins = {make_ball(2), make_ellipsoid({2.0, 1.0}),
                                                  make_complex_ellipsoid({1, 2}), worm};
  for (std::size_t i = 0; i < builtins.size(); ++i)
    r.finite_differences.push_back(
        ad_fd_consistency(builtins[i], random_region_points(builtins[i], fd_points, seed + 100 + i)));
  return r;
}

nlohmann::json to_json(const SelftestReport& r) {
  nlohmann::json fd = nlohmann::json::array();
  for (const auto& f : r.finite_differences)
    fd.push_back({{"domain", f.domain}, {"points", f.points}, {"grad_rel", f.grad_rel}, {"hess_rel", f.hess_rel}});
  return {{"keylem", {{"psi_count", r.psi_count}, {"sigma_points", r.sigma_points}, {"r1", r.keylem_r1},
                      {"r2", r.keylem_r2}, {"tolerance", r.keylem_tolerance}}},
          {"ad_fd", fd},
          {"fd_tolerance", r.fd_tolerance},
          {"passed", r.passed()}};
}

}  // namespace stein
