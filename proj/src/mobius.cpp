#include "kqmolsa/mobius.hpp"

#include <cmath>

#include <Eigen/LU>

namespace kqmolsa {

Mobius Mobius::from_matrix(const Eigen::Matrix2cd& mat) {
  const cplx det = mat.determinant();
  const double scale = mat.cwiseAbs2().sum();
  if (!(std::abs(det) > 1e-28 * scale) || !std::isfinite(std::abs(det)))
    throw DomainError("singular Mobius matrix");
  Mobius out;
  out.m = mat / std::sqrt(det);
  return out;
}

Mobius Mobius::from_coefficients(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  Eigen::Matrix2cd mat;
  mat << alpha, beta, gamma, delta;
  return from_matrix(mat);
}

namespace {

// Map sending p1 -> 0, p2 -> 1, p3 -> infinity.
Eigen::Matrix2cd cross_ratio_matrix(const HomPoint& p1, const HomPoint& p2, const HomPoint& p3) {
  // L_i(u) = u0 * p_i1 - u1 * p_i0 vanishes at p_i.
  auto L = [](const HomPoint& p, const HomPoint& u) { return u(0) * p(1) - u(1) * p(0); };
  const cplx l3 = L(p3, p2);
  const cplx l1 = L(p1, p2);
  Eigen::Matrix2cd s;
  s << l3 * p1(1), -l3 * p1(0), l1 * p3(1), -l1 * p3(0);
  return s;
}

}  // namespace

Mobius Mobius::from_three_points(const HomPoint& z1, const HomPoint& z2, const HomPoint& z3,
                                 const HomPoint& w1, const HomPoint& w2, const HomPoint& w3) {
  const Eigen::Matrix2cd s = cross_ratio_matrix(z1, z2, z3);
  const Eigen::Matrix2cd t = cross_ratio_matrix(w1, w2, w3);
  return from_matrix(t.inverse() * s);
}

Mobius Mobius::rotation(double theta) {
  const cplx h = std::polar(1.0, 0.5 * theta);
  return from_coefficients(h, 0.0, 0.0, std::conj(h));
}

Mobius Mobius::inversion() { return from_coefficients(0.0, cplx(0, 1), cplx(0, 1), 0.0); }

cplx Mobius::operator()(cplx z) const { return dehom(apply(hom(z))); }

Mobius Mobius::inverse() const {
  Mobius out;
  out.m << delta(), -beta(), -gamma(), alpha();
  return out;
}

Mobius Mobius::operator*(const Mobius& other) const { return from_matrix(m * other.m); }

HomPoint Mobius::pole() const { return HomPoint(-delta(), gamma()); }

HomPoint hom(cplx z) { return HomPoint(z, 1.0); }

bool is_infinite(const HomPoint& p, double tol) { return std::abs(p(1)) <= tol * std::abs(p(0)); }

cplx dehom(const HomPoint& p) {
  if (is_infinite(p, 1e-300) || p(1) == 0.0) throw DomainError("point at infinity");
  return p(0) / p(1);
}

Disc circumcircle(cplx a, cplx b, cplx c) {
  const cplx ab = b - a, ac = c - a;
  const double cross = ab.real() * ac.imag() - ab.imag() * ac.real();
  const double size = std::max({std::abs(ab), std::abs(ac), std::abs(c - b)});
  if (!(std::abs(cross) > 1e-13 * size * size)) throw DomainError("circumcircle of collinear points");
  const double nb = std::norm(ab), nc = std::norm(ac);
  const cplx centre_rel((ac.imag() * nb - ab.imag() * nc) / (2 * cross),
                        (ab.real() * nc - ac.real() * nb) / (2 * cross));
  return {a + centre_rel, std::abs(centre_rel)};
}

CircleImage circle_image(const Mobius& m, const Disc& d) {
  if (m.gamma() == 0.0) {
    const cplx s = m.alpha() / m.delta();
    return {{m(d.centre), d.radius * std::abs(s)}, false};
  }
  const cplx p = -m.delta() / m.gamma();
  const cplx rel = p - d.centre;
  const double dist = std::abs(rel);
  if (std::abs(dist - d.radius) <= 1e-12 * d.radius)
    throw DomainError("circle image: pole of the map lies on the circle");
  // The reflection of the pole in the circle maps to the image centre
  // (homogeneous, so a pole at the centre reflects to infinity).
  const HomPoint reflected(d.centre * std::conj(rel) + d.radius * d.radius, std::conj(rel));
  const cplx centre = dehom(m.apply(reflected));
  // Boundary point farthest from the pole: best conditioned.
  const cplx dir = dist > 0 ? rel / dist : cplx(1.0);
  const cplx boundary = d.centre - d.radius * dir;
  return {{centre, std::abs(m(boundary) - centre)}, dist < d.radius};
}

Disc disc_image(const Mobius& m, const Disc& d) {
  const CircleImage img = circle_image(m, d);
  if (img.inverted) throw DomainError("disc image: pole of the map lies inside the disc");
  return img.circle;
}

}  // namespace kqmolsa
