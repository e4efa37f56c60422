#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kqmolsa/kahler_potential.hpp"

namespace kqmolsa {

enum class HoleMode {
  ZeroNodes,  // grid nodes inside a child disc get weight 0
  ClipRays,   // each ray is cut at the child discs and every remaining
              // segment gets its own n_r-interval trapezium rule
};

enum class RadialRule {
  Uniform,    // rho_s = s / n_r
  EqualArea,  // uniform in t = rho^2 / (rho^2 + eps), where eps is the chart's
              // round-metric constant: the area element is constant in t
};

struct QuadratureConfig {
  int n_r = 15;
  int n_theta = 10;
  HoleMode holes = HoleMode::ClipRays;
  RadialRule radial = RadialRule::EqualArea;
  double area_tolerance = 0.05;  // relative deviation of the recovered area from the domain area

  void validate() const;  // throws std::invalid_argument
};

struct ShapeDescriptor {
  int k = 1;
  Eigen::MatrixXcd M;
  double area_original = 0;  // before rescaling, square angstrom
  double area_check = 0;     // quadrature estimate of the rescaled area
  std::string molecule_name;
  QuadratureConfig quadrature;
  Eigen::Index n_spheres = 0;
  // For k >= 2: the k = 1 matrix of the same quadrature, used to seed the
  // alignment search.
  std::optional<Eigen::MatrixXcd> seed_k1;
  std::vector<std::string> warnings;

  Eigen::Index dim() const { return 2 * k + 1; }
};

struct QuadratureResult {
  std::vector<Eigen::MatrixXcd> M;  // one matrix per requested level
  double area = 0;
};

/// Integrates z^i conj(z)^j e^{-k phi} dA over the surface for each k in
/// `levels`. No area check.
QuadratureResult integrate(const PlanarDomain& domain, const PotentialData& pot, const std::vector<int>& levels,
                           const QuadratureConfig& q);

/// Throws QuadratureError when the recovered area is off from the domain area
/// (4 pi for a tree-shaped intersection graph) by more than q.area_tolerance,
/// or the integrand is not finite.
ShapeDescriptor quantize(const PlanarDomain& domain, const PotentialData& pot, int k, const QuadratureConfig& q = {});

}  // namespace kqmolsa
