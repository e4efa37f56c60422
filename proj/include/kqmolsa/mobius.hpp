#pragma once

#include <Eigen/Core>

#include "kqmolsa/types.hpp"

namespace kqmolsa {

/// z -> (alpha z + beta) / (gamma z + delta), stored as a 2x2 matrix with
/// determinant 1. Composition is matrix product: (a * b)(z) = a(b(z)).
struct Mobius {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();

  static Mobius identity() { return {}; }
  /// Normalizes to det 1. Throws DomainError for a singular matrix.
  static Mobius from_matrix(const Eigen::Matrix2cd& mat);
  static Mobius from_coefficients(cplx alpha, cplx beta, cplx gamma, cplx delta);
  /// The unique map sending z_i to w_i (homogeneous points, i = 1..3).
  static Mobius from_three_points(const HomPoint& z1, const HomPoint& z2, const HomPoint& z3,
                                  const HomPoint& w1, const HomPoint& w2, const HomPoint& w3);
  /// Rotation w -> e^{i theta} w.
  static Mobius rotation(double theta);
  /// w -> 1/w.
  static Mobius inversion();

  cplx alpha() const { return m(0, 0); }
  cplx beta() const { return m(0, 1); }
  cplx gamma() const { return m(1, 0); }
  cplx delta() const { return m(1, 1); }

  HomPoint apply(const HomPoint& p) const { return m * p; }
  /// Throws DomainError when z is the pole.
  cplx operator()(cplx z) const;
  Mobius inverse() const;
  Mobius operator*(const Mobius& other) const;
  /// Point sent to infinity (infinite when gamma == 0).
  HomPoint pole() const;
};

struct Disc {
  cplx centre;
  double radius = 0;

  bool contains(cplx z) const { return std::abs(z - centre) < radius; }
};

HomPoint hom(cplx z);
/// Throws DomainError if p is (numerically) the point at infinity.
cplx dehom(const HomPoint& p);
bool is_infinite(const HomPoint& p, double tol = 1e-14);

/// Circle through three finite points. Throws DomainError if they are
/// (numerically) collinear.
Disc circumcircle(cplx a, cplx b, cplx c);

/// Image of a disc as a circle. When the pole of m lies inside the disc the
/// disc maps to the exterior of the returned circle (`inverted` = true).
/// Throws DomainError when the pole is on the boundary (half-plane image).
struct CircleImage {
  Disc circle;
  bool inverted = false;
};
CircleImage circle_image(const Mobius& m, const Disc& d);

/// Exact image of the disc. Throws DomainError if the pole of m lies on or
/// inside the disc (the image would be a half-plane or a disc complement).
Disc disc_image(const Mobius& m, const Disc& d);

}  // namespace kqmolsa
