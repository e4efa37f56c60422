#pragma once

#include <string>

#include "kqmolsa/mol_ingest.hpp"
#include "kqmolsa/quantizer.hpp"
#include "kqmolsa/surface_model.hpp"

namespace kqmolsa {

struct PipelineOptions {
  int k = 1;
  QuadratureConfig quadrature;
  SphereBuildOptions spheres;
  AdjacencyMode adjacency = AdjacencyMode::Auto;
};

/// Sphere set -> descriptor (area_original taken from the unscaled spheres).
ShapeDescriptor describe_spheres(const SphereSet& spheres, const PipelineOptions& opts = {},
                                 const std::string& name = "");

ShapeDescriptor describe_molecule(const MoleculeRecord& mol, const RadiiTable& radii,
                                  const PipelineOptions& opts = {});

}  // namespace kqmolsa
