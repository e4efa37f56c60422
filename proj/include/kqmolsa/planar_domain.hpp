#pragma once

#include <string>
#include <vector>

#include "kqmolsa/mobius.hpp"
#include "kqmolsa/surface_model.hpp"

namespace kqmolsa {

/// Stereographic chart of one sphere: x -> u = [y.e1 - i y.e2 : 1 - y.n]
/// with y = (x - centre)/radius. (e1, e2, n) is right-handed, so every chart
/// has the same orientation and the transition maps are holomorphic.
struct SphereChart {
  Vec3 centre = Vec3::Zero();
  double radius = 1;
  Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), n = Vec3::UnitZ();

  static SphereChart with_pole(const Vec3& centre, double radius, const Vec3& pole_direction);
  HomPoint project(const Vec3& x) const;
};

/// One piece of the piecewise projection. Region indices equal sphere indices.
///
/// Metric function on the region: F(z) = C / (2 (|z - A|^2 + B)^2), with
/// C = 4 B r^2; the area element is 2 F dx dy. For the base region A = 0,
/// B = 1 and F = 2 r_B^2 / (1 + |z|^2)^2.
struct PlanarRegion {
  Eigen::Index sphere_index = 0;
  int level = 0;
  Eigen::Index parent = -1;
  std::vector<Eigen::Index> children;
  double r = 1;  // rescaled sphere radius

  Disc disc;  // D(a, R); unused for the base region
  cplx A = 0.0;
  double B = 1;
  double C = 4;

  SphereChart sphere_chart;
  Mobius chart;         // u -> z
  Mobius centering;     // z -> w, D(a, R) onto the unit disc, cap centre -> 0
  Mobius to_unit_disc;  // w -> z; for the base region the unit disc covers the
                        // complement of its pseudo-parent's disc
  Eigen::Index pseudo_parent = -1;  // base only: child with the largest cap

  bool is_base() const { return parent < 0; }
  double metric(cplx z) const;  // F(z) with this region's parameters
};

struct PlanarDomain {
  std::vector<PlanarRegion> regions;
  Eigen::Index base = 0;
  double r_B = 1;
  std::vector<Eigen::Index> bfs_order;
  Vec3 pole = Vec3::UnitZ();  // base projection pole, unit vector
  double expected_area = kFourPi;  // area covered by the regions (tree area)
  std::vector<std::string> warnings;

  Eigen::Index size() const { return static_cast<Eigen::Index>(regions.size()); }
  /// Deepest region whose disc contains z (the base region if none).
  Eigen::Index locate(cplx z) const;
};

/// Right-handed orthonormal (e1, e2) completing n.
void complete_frame(const Vec3& n, Vec3& e1, Vec3& e2);

/// Point of the base sphere farthest (in angle) from every intersection cap.
/// Returns the unit direction; throws DomainError if every point is covered.
Vec3 choose_pole(const SurfaceGeometry& geom, Eigen::Index base);

PlanarDomain build_domain(const SurfaceGeometry& geom);

double metric_F(const PlanarDomain& domain, cplx z);

}  // namespace kqmolsa
