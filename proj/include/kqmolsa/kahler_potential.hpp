#pragma once

#include <vector>

#include <Eigen/Core>

#include "kqmolsa/planar_domain.hpp"

namespace kqmolsa {

struct LocalTerm {
  double coeff = 2;  // 2 r_i^2, so that d dbar of the term equals F
  cplx A = 0.0;
  double B = 1;
};

/// On region i:
///   phi(z) = coeff_i log(|z - A_i|^2 + B_i) + sum_l K(i,l) log|alpha(i,l) z + beta(i,l)|^2.
/// Column l = base carries the region's additive constant (alpha = 0).
struct PotentialData {
  Eigen::MatrixXd K;
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd beta;
  std::vector<LocalTerm> local;
  Eigen::Index base = 0;

  Eigen::Index size() const { return K.rows(); }
  /// Coefficient G of log|z|^2 at infinity on region i's formula.
  double growth(Eigen::Index i) const;
};

PotentialData solve_potential(const PlanarDomain& domain);

/// phi from region i's formula (valid on region i and a neighbourhood of it).
double evaluate_phi_region(const PotentialData& pot, Eigen::Index region, cplx z);

/// Homogeneous form for z = z0 / z1: phi = L - G log|z1|^2 with G = growth(i).
/// Finite at z1 = 0.
double evaluate_phi_log_part(const PotentialData& pot, Eigen::Index region, cplx z0, cplx z1);

/// phi from the formula of the deepest region containing z.
double evaluate_phi(const PotentialData& pot, const PlanarDomain& domain, cplx z);

}  // namespace kqmolsa
