#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kqmolsa/types.hpp"

namespace kqmolsa {

struct Atom {
  std::string element;
  Vec3 position;
};

struct Bond {
  int a = 0;
  int b = 0;
  int order = 1;
};

struct MoleculeRecord {
  std::string name;
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  std::size_t heavy_atom_count() const;
};

bool is_hydrogen(std::string_view element);

/// Parses one V2000 MOL block (everything up to and including "M  END";
/// trailing SD data fields are ignored). Throws ParseError.
MoleculeRecord parse_sdf(std::string_view block);

/// Splits an SD file on "$$$$" and parses every non-empty record.
std::vector<MoleculeRecord> parse_sdf_file_contents(std::string_view contents);
std::vector<MoleculeRecord> read_sdf_file(const std::string& path);

/// Smallest set of smallest rings of the heavy-atom bond graph. Each ring is
/// reported once, as atom indices in traversal order starting from its
/// lowest index.
std::vector<std::vector<int>> detect_rings(const MoleculeRecord& mol);

/// Van der Waals radii in angstrom keyed by element symbol.
class RadiiTable {
 public:
  static RadiiTable bondi();
  static RadiiTable from_file(const std::string& path);
  static RadiiTable parse(std::string_view text);

  void set(const std::string& element, double radius);
  double at(const std::string& element) const;  // throws RejectedMolecule
  bool contains(const std::string& element) const;

 private:
  std::map<std::string, double> radii_;
};

enum class SphereOrigin { Atom, CollapsedRing };

struct SphereSet {
  Eigen::Matrix3Xd centres;
  Eigen::VectorXd radii;
  std::vector<SphereOrigin> origin;
  // Sphere-level bond graph. Empty topology means "unknown": adjacency then
  // falls back to pure geometric intersection.
  std::vector<std::pair<int, int>> bonds;
  bool has_topology = false;

  Eigen::Index size() const { return radii.size(); }
  static SphereSet from_spheres(const Eigen::Matrix3Xd& centres, const Eigen::VectorXd& radii);
};

struct SphereBuildOptions {
  double ring_radius = 2.25;
  std::size_t max_ring_size = 12;
};

/// Strips hydrogens and collapses every SSSR ring to one sphere at the ring
/// centroid. Throws RejectedMolecule("macrocycle" | "radius" | "empty").
SphereSet build_sphere_set(const MoleculeRecord& mol, const RadiiTable& radii,
                           const SphereBuildOptions& opts = {});

}  // namespace kqmolsa
