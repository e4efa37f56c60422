#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "kqmolsa/mol_ingest.hpp"

namespace kqmolsa {

enum class AdjacencyMode {
  Auto,       // Bonded when the sphere set carries a bond graph, else Geometric
  Geometric,  // every properly intersecting pair
  Bonded,     // properly intersecting pairs that are also bonded
};

/// Sphere intersection structure. `spheres` is the input with engulfed
/// spheres removed; `source_index` maps back to the input order.
struct IntersectionGraph {
  SphereSet spheres;
  std::vector<Eigen::Index> source_index;
  Eigen::MatrixXi T;       // symmetric 0/1, zero diagonal
  Eigen::MatrixXd lambda;  // lambda(i,j): signed distance c_i -> plane of the i-j circle
  std::vector<std::string> warnings;

  Eigen::Index size() const { return T.rows(); }
};

/// lambda_ij = (d^2 + r_i^2 - r_j^2) / (2 d).
double intersection_offset(double d, double r_i, double r_j);

/// Throws RejectedMolecule("disconnected") if the intersection graph is not
/// connected.
IntersectionGraph build_adjacency(const SphereSet& spheres, AdjacencyMode mode = AdjacencyMode::Auto);

/// Sphere area minus the intersection caps (in the units of the sphere set).
double surface_area(const SphereSet& spheres, const IntersectionGraph& graph);

struct SurfaceGeometry {
  SphereSet spheres;  // rescaled so the surface area is 4 pi
  IntersectionGraph graph;  // lambda rescaled with the spheres
  double area_original = 0;  // square angstrom
  double scale_factor = 1;
  // Rescaled area counting only the caps of BFS-tree edges: the area the
  // planar domain actually covers. Equals 4 pi unless T has cycles.
  double tree_area = 0;
  Eigen::Index base_index = 0;
  std::vector<int> levels;
  std::vector<Eigen::Index> parent;  // -1 for the base
  std::vector<std::vector<Eigen::Index>> children;  // BFS tree, ascending index

  Eigen::Index size() const { return spheres.size(); }
  std::vector<Eigen::Index> bfs_order() const;
};

SurfaceGeometry rescale_and_root(const IntersectionGraph& graph);

/// Convenience: adjacency, area and rescaling in one call.
SurfaceGeometry build_surface(const SphereSet& spheres, AdjacencyMode mode = AdjacencyMode::Auto);

}  // namespace kqmolsa
