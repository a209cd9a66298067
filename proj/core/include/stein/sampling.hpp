#pragma once

#include "stein/domains.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace stein {

/// Halton sequence with a seeded Cranley-Patterson rotation. Deterministic
/// for a fixed (dims, seed).
class LowDiscrepancySequence {
 public:
  LowDiscrepancySequence(int dims, std::uint64_t seed);

  /// Next point of [0, 1)^dims.
  Eigen::VectorXd next();

 private:
  int dims_;
  std::uint64_t index_ = 1;
  Eigen::VectorXd shift_;
};

/// Maps a point of [0, 1)^d (d even) to the unit sphere of R^d through
/// paired Box-Muller transforms.
Eigen::VectorXd to_unit_sphere(const Eigen::VectorXd& u);

/// Boundary points of a domain star-shaped about `center`, one per
/// quasi-random direction, each polished to |rho| <= 1e-12.
std::vector<Eigen::VectorXd> radial_boundary_samples(const DefiningFunction& rho, const Eigen::VectorXd& center,
                                                     std::size_t count, std::uint64_t seed);

enum class Side { Inner, Outer };

const char* to_string(Side side);

/// Points with |rho| in [depth_min, depth_max], inside (Inner) or outside
/// (Outer) the domain.
struct ShellSpec {
  double depth_min = 1e-3;
  double depth_max = 5e-2;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
};

/// Shell points reached by moving along the normal line from quasi-randomly
/// chosen boundary anchors and solving rho = -+depth by Newton iteration.
std::vector<Eigen::VectorXd> sample_shell(const DefiningFunction& rho, const std::vector<Eigen::VectorXd>& anchors,
                                          const ShellSpec& spec, Side side);

}  // namespace stein
