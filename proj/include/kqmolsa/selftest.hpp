#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "kqmolsa/mol_ingest.hpp"
#include "kqmolsa/quantizer.hpp"

namespace kqmolsa {

/// Zigzag chain of n spheres: 2.5 A spacing, 140 degree bends, a slight
/// out-of-plane torsion, radii cycling through 1.5, 1.9, 2.25, 1.7. Only
/// consecutive spheres intersect.
SphereSet synthetic_chain(int n);

struct SelfTestOptions {
  QuadratureConfig quadrature;
  std::uint64_t seed = 12345;
};

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& opts = {});

/// One "name: PASS|FAIL (detail)" line per check; returns true if all passed.
bool print_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& out);

}  // namespace kqmolsa
