#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "kqmolsa/minimize.hpp"
#include "kqmolsa/mobius.hpp"
#include "kqmolsa/quantizer.hpp"

namespace kqmolsa {

using MobiusParams = Eigen::Matrix<double, 6, 1>;

/// log of the eigenvalues of M1^{-1} M2 (ascending), via Cholesky whitening
/// of M1 and a Hermitian eigensolve. Throws NonPositiveDefinite.
Eigen::VectorXd log_eigenvalues(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2);

/// k^{-3/2} sqrt(sum log^2 eta), no scale optimization.
double raw_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k);

/// p = -mean(log eta): the scale for which e^p M2 is closest to M1.
double scale_optimum(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k);

/// raw_distance(M1, e^p M2) with p from scale_optimum.
double scaled_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k);

/// Action of w on polynomials of degree <= 2k: s(z) -> (gamma z + delta)^{2k} s(w(z)),
/// in the monomial basis 1, z, ..., z^{2k}. Column j holds (alpha z + beta)^j (gamma z + delta)^{2k-j}.
Eigen::MatrixXcd sym_power_rep(const Mobius& w, int k);

/// theta(w)^* M theta(w).
Eigen::MatrixXcd act(const Eigen::MatrixXcd& M, const Mobius& w, int k);

/// (x1 + i x2, x3 + i x4; x5 + i x6, (1 + (x3 + i x4)(x5 + i x6)) / (x1 + i x2)).
/// Throws DomainError when x1 + i x2 vanishes.
Mobius params_to_mobius(const MobiusParams& x);
MobiusParams mobius_to_params(const Mobius& w);  // requires alpha != 0
MobiusParams identity_params();

struct SanitizeResult {
  Eigen::MatrixXcd M;
  double factor = 1;
};

inline constexpr double kEigenFloor = 1e-3;
inline constexpr double kConditionLimit = 1e-12;

/// Hermitian part of M, scaled by the first of 1, 10, 100, 1000 that lifts the
/// smallest eigenvalue to kEigenFloor. Throws NonPositiveDefinite for a
/// non-positive or hopelessly conditioned spectrum, or when 1000 is not enough.
SanitizeResult sanitize(const Eigen::MatrixXcd& M);

enum class Minimizer { NelderMead, Powell };

struct DistanceOptions {
  Minimizer minimizer = Minimizer::NelderMead;
  MinimizeOptions minimize;
  int max_restarts = 8;  // re-centred restarts from the incumbent
  // Also start from start * R for the 24 rotations of the octahedral group:
  // the objective has shallow local minima along the rotation directions.
  bool rotation_starts = true;
  std::uint64_t seed = 20240117;
};

struct AlignmentResult {
  double distance = 0;   // k^{-3/2} sqrt(objective)
  double scale = 0;      // p
  MobiusParams mobius_params = MobiusParams::Zero();
  Mobius alignment;      // same map as mobius_params
  bool converged = false;
  double objective = 0;  // zeta = sum (log eta + p)^2 at the optimum
  double raw = 0;        // scaled distance before alignment
  int restarts = 0;
};

/// The 24 rotations of the octahedral group as SU(2) matrices (identity first).
std::vector<Mobius> octahedral_rotations();

/// min over w of the scaled distance between M1 and theta(w)^* M2 theta(w).
/// Inputs must already be positive definite (see sanitize).
AlignmentResult min_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k,
                             const DistanceOptions& opts = {}, const Mobius& start = Mobius::identity());

struct DescriptorComparison {
  AlignmentResult alignment;
  double factor1 = 1, factor2 = 1;  // sanitize factors
};

/// Sanitizes both matrices and aligns. For k >= 2 the k = 1 optimum of the
/// stored seed matrices (when both descriptors carry them) is the start point.
/// Throws std::invalid_argument on a quantization level mismatch.
DescriptorComparison compare_descriptors(const ShapeDescriptor& a, const ShapeDescriptor& b,
                                         const DistanceOptions& opts = {});

}  // namespace kqmolsa
