#include "stein/sampling.hpp"

#include "stein/errors.hpp"
#include "stein/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace stein {
namespace {

constexpr std::array<int, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (i > 0) {
    result += f * static_cast<double>(i % base);
    i /= base;
    f /= base;
  }
  return result;
}

}  // namespace

LowDiscrepancySequence::LowDiscrepancySequence(int dims, std::uint64_t seed) : dims_(dims), shift_(dims) {
  if (dims < 1 || dims > static_cast<int>(kPrimes.size()))
    throw std::invalid_argument("LowDiscrepancySequence: unsupported dimension");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int d = 0; d < dims; ++d) shift_(d) = unif(rng);
}

Eigen::VectorXd LowDiscrepancySequence::next() {
  Eigen::VectorXd u(dims_);
  for (int d = 0; d < dims_; ++d) {
    const double v = radical_inverse(index_, kPrimes[d]) + shift_(d);
    u(d) = v - std::floor(v);
  }
  ++index_;
  return u;
}

Eigen::VectorXd to_unit_sphere(const Eigen::VectorXd& u) {
  if (u.size() % 2 != 0) throw std::invalid_argument("to_unit_sphere: odd dimension");
  Eigen::VectorXd g(u.size());
  for (Eigen::Index k = 0; k < u.size(); k += 2) {
    const double r = std::sqrt(-2.0 * std::log(std::max(u(k), 1e-300)));
    const double a = 2.0 * std::numbers::pi * u(k + 1);
    g(k) = r * std::cos(a);
    g(k + 1) = r * std::sin(a);
  }
  const double len = g.norm();
  if (len == 0.0) {
    g.setZero();
    g(0) = 1.0;
    return g;
  }
  return g / len;
}

std::vector<Eigen::VectorXd> radial_boundary_samples(const DefiningFunction& rho, const Eigen::VectorXd& center,
                                                     std::size_t count, std::uint64_t seed) {
  if (!(rho.value(center) < 0.0)) throw std::invalid_argument("radial_boundary_samples: center must be inside");
  LowDiscrepancySequence seq(2 * rho.n, seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::VectorXd dir = to_unit_sphere(seq.next());
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (rho.value(center + hi * dir) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 60) throw ConvergenceError("radial_boundary_samples: unbounded ray");
    }
    for (int it = 0; it < 80 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rho.value(center + mid * dir) < 0.0 ? lo : hi) = mid;
    }
    out.push_back(project_to_level(rho, center + 0.5 * (lo + hi) * dir, 0.0));
  }
  return out;
}

const char* to_string(Side side) { return side == Side::Inner ? "inner" : "outer"; }

std::vector<Eigen::VectorXd> sample_shell(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& anchors,
                                          const ShellSpec& spec, Side side) {
  if (anchors.empty()) throw std::invalid_argument("sample_shell: no boundary anchors");
  if (!(spec.depth_min > 0.0) || !(spec.depth_max >= spec.depth_min))
    throw std::invalid_argument("sample_shell: need 0 < depth_min <= depth_max");
  const double sign = side == Side::Inner ? -1.0 : 1.0;
  LowDiscrepancySequence seq(2, spec.seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const Eigen::VectorXd u = seq.next();
    const auto k = std::min(anchors.size() - 1, static_cast<std::size_t>(u(0) * static_cast<double>(anchors.size())));
    const double depth = spec.depth_min + u(1) * (spec.depth_max - spec.depth_min);
    const Eigen::VectorXd& a = anchors[k];
    const Jet2 jet = rho.jet(a);
    const double g = jet.grad().norm();
    const Eigen::VectorXd start = a + (sign * depth / g) * real_unit_normal(jet);
    out.push_back(project_to_level(rho, start, sign * depth));
  }
  return out;
}

}  // namespace stein
