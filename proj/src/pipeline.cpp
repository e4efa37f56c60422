#include "kqmolsa/pipeline.hpp"

namespace kqmolsa {

ShapeDescriptor describe_spheres(const SphereSet& spheres, const PipelineOptions& opts, const std::string& name) {
  const IntersectionGraph graph = build_adjacency(spheres, opts.adjacency);
  const SurfaceGeometry geom = rescale_and_root(graph);
  const PlanarDomain dom = build_domain(geom);
  const PotentialData pot = solve_potential(dom);
  ShapeDescriptor d = quantize(dom, pot, opts.k, opts.quadrature);
  d.area_original = geom.area_original;
  d.molecule_name = name;
  d.warnings.insert(d.warnings.begin(), graph.warnings.begin(), graph.warnings.end());
  return d;
}

ShapeDescriptor describe_molecule(const MoleculeRecord& mol, const RadiiTable& radii, const PipelineOptions& opts) {
  return describe_spheres(build_sphere_set(mol, radii, opts.spheres), opts, mol.name);
}

}  // namespace kqmolsa
