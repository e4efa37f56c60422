#include "kqmolsa/mol_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kqmolsa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view field(std::string_view line, std::size_t pos, std::size_t len) {
  if (pos >= line.size()) return {};
  return line.substr(pos, std::min(len, line.size() - pos));
}

// std::from_chars for double is available in libstdc++ 11.
template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string normalise_symbol(std::string_view raw) {
  std::string s(trim(raw));
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    for (std::size_t i = 1; i < s.size(); ++i)
      s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  }
  return s;
}

}  // namespace

bool is_hydrogen(std::string_view element) {
  return element == "H" || element == "D" || element == "T";
}

std::size_t MoleculeRecord::heavy_atom_count() const {
  return static_cast<std::size_t>(std::count_if(
      atoms.begin(), atoms.end(), [](const Atom& a) { return !is_hydrogen(a.element); }));
}

MoleculeRecord parse_sdf(std::string_view block) {
  const auto lines = split_lines(block);
  if (lines.size() < 4) throw ParseError("SDF: record shorter than the 4-line header");

  MoleculeRecord mol;
  mol.name = std::string(trim(lines[0]));
  const bool flagged_2d = trim(field(lines[1], 20, 2)) == "2D";

  const std::string_view counts = lines[3];
  if (counts.find("V3000") != std::string_view::npos)
    throw ParseError("SDF: V3000 records are not supported");
  int n_atoms = 0;
  int n_bonds = 0;
  if (counts.size() < 6 || !parse_number(field(counts, 0, 3), n_atoms) ||
      !parse_number(field(counts, 3, 3), n_bonds) || n_atoms < 0 || n_bonds < 0)
    throw ParseError("SDF: malformed counts line: '" + std::string(counts) + "'");

  std::size_t row = 4;
  for (int i = 0; i < n_atoms; ++i, ++row) {
    if (row >= lines.size())
      throw ParseError("SDF: counts line declares " + std::to_string(n_atoms) + " atoms, found " +
                       std::to_string(i));
    const std::string_view line = lines[row];
    double x = 0, y = 0, z = 0;
    if (line.size() < 34 || line.starts_with("M  ") || !parse_number(field(line, 0, 10), x) ||
        !parse_number(field(line, 10, 10), y) || !parse_number(field(line, 20, 10), z))
      throw ParseError("SDF: counts line declares " + std::to_string(n_atoms) + " atoms, found " +
                       std::to_string(i) + " (bad atom line '" + std::string(line) + "')");
    std::string symbol = normalise_symbol(field(line, 31, 3));
    if (symbol.empty()) throw ParseError("SDF: missing element symbol on atom " + std::to_string(i + 1));
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      throw ParseError("SDF: non-finite coordinate on atom " + std::to_string(i + 1));
    mol.atoms.push_back({std::move(symbol), Vec3(x, y, z)});
  }

  for (int i = 0; i < n_bonds; ++i, ++row) {
    if (row >= lines.size())
      throw ParseError("SDF: counts line declares " + std::to_string(n_bonds) + " bonds, found " +
                       std::to_string(i));
    const std::string_view line = lines[row];
    int a = 0, b = 0, order = 0;
    if (line.starts_with("M  ") || !parse_number(field(line, 0, 3), a) ||
        !parse_number(field(line, 3, 3), b) || !parse_number(field(line, 6, 3), order))
      throw ParseError("SDF: counts line declares " + std::to_string(n_bonds) + " bonds, found " +
                       std::to_string(i) + " (bad bond line '" + std::string(line) + "')");
    if (a < 1 || b < 1 || a > n_atoms || b > n_atoms || a == b)
      throw ParseError("SDF: bond " + std::to_string(i + 1) + " references invalid atom index");
    mol.bonds.push_back({a - 1, b - 1, order});
  }

  if (flagged_2d && !mol.atoms.empty() &&
      std::all_of(mol.atoms.begin(), mol.atoms.end(), [](const Atom& at) { return at.position.z() == 0.0; }))
    throw ParseError("SDF: record '" + mol.name + "' is 2D; 3D coordinates are required");
  if (mol.heavy_atom_count() == 0) throw ParseError("SDF: record '" + mol.name + "' has no heavy atoms");
  return mol;
}

std::vector<MoleculeRecord> parse_sdf_file_contents(std::string_view contents) {
  std::vector<MoleculeRecord> out;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find("$$$$", start);
    std::string_view record =
        contents.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    // Drop the newline left over from the previous "$$$$" line.
    if (!record.empty() && record.front() == '\r') record.remove_prefix(1);
    if (!record.empty() && record.front() == '\n') record.remove_prefix(1);
    if (!trim(record).empty()) out.push_back(parse_sdf(record));
    if (end == std::string_view::npos) break;
    start = end + 4;
  }
  return out;
}

std::vector<MoleculeRecord> read_sdf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sdf_file_contents(ss.str());
}

// ---------------------------------------------------------------------------

RadiiTable RadiiTable::bondi() {
  RadiiTable t;
  t.radii_ = {{"C", 1.70}, {"N", 1.55}, {"O", 1.52}, {"S", 1.80}, {"F", 1.47},
              {"Cl", 1.75}, {"Br", 1.85}, {"I", 1.98}, {"P", 1.80}, {"H", 1.20}};
  return t;
}

RadiiTable RadiiTable::parse(std::string_view text) {
  RadiiTable t;
  int lineno = 0;
  for (std::string_view line : split_lines(text)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls{std::string(line)};
    std::string symbol, value, extra;
    ls >> symbol >> value;
    double r = 0;
    if (value.empty() || (ls >> extra) || !parse_number(value, r) || !(r > 0))
      throw ParseError("radii table line " + std::to_string(lineno) + ": expected 'SYMBOL radius'");
    t.set(normalise_symbol(symbol), r);
  }
  return t;
}

RadiiTable RadiiTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open radii table '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RadiiTable::set(const std::string& element, double radius) { radii_[element] = radius; }

bool RadiiTable::contains(const std::string& element) const { return radii_.count(element) != 0; }

double RadiiTable::at(const std::string& element) const {
  auto it = radii_.find(element);
  if (it == radii_.end())
    throw RejectedMolecule("radius", "no van der Waals radius for element '" + element + "'");
  return it->second;
}

// ---------------------------------------------------------------------------

SphereSet SphereSet::from_spheres(const Eigen::Matrix3Xd& centres, const Eigen::VectorXd& radii) {
  SphereSet s;
  s.centres = centres;
  s.radii = radii;
  s.origin.assign(static_cast<std::size_t>(radii.size()), SphereOrigin::Atom);
  return s;
}

SphereSet build_sphere_set(const MoleculeRecord& mol, const RadiiTable& table,
                           const SphereBuildOptions& opts) {
  const auto rings = detect_rings(mol);
  for (const auto& ring : rings) {
    if (ring.size() > opts.max_ring_size)
      throw RejectedMolecule("macrocycle", "macrocycle: molecule '" + mol.name + "' has a " +
                                               std::to_string(ring.size()) + "-membered ring");
  }

  const int n_atoms = static_cast<int>(mol.atoms.size());
  std::vector<std::vector<int>> atom_rings(mol.atoms.size());
  for (int r = 0; r < static_cast<int>(rings.size()); ++r)
    for (int a : rings[r]) atom_rings[a].push_back(r);

  // Sphere index owning each heavy atom; ring atoms map to every ring sphere
  // they belong to.
  std::vector<std::vector<int>> owners(mol.atoms.size());
  std::vector<Vec3> centres;
  std::vector<double> radii;
  std::vector<SphereOrigin> origin;

  // Atom spheres first, in atom order, then ring spheres in ring order.
  for (int i = 0; i < n_atoms; ++i) {
    const Atom& at = mol.atoms[i];
    if (is_hydrogen(at.element) || !atom_rings[i].empty()) continue;
    owners[i].push_back(static_cast<int>(centres.size()));
    centres.push_back(at.position);
    radii.push_back(table.at(at.element));
    origin.push_back(SphereOrigin::Atom);
  }
  for (const auto& ring : rings) {
    Vec3 c = Vec3::Zero();
    for (int a : ring) {
      table.at(mol.atoms[a].element);  // still validate the element
      c += mol.atoms[a].position;
    }
    c /= static_cast<double>(ring.size());
    const int idx = static_cast<int>(centres.size());
    for (int a : ring) owners[a].push_back(idx);
    centres.push_back(c);
    radii.push_back(opts.ring_radius);
    origin.push_back(SphereOrigin::CollapsedRing);
  }
  if (centres.empty()) throw RejectedMolecule("empty", "molecule '" + mol.name + "' has no heavy atoms");

  std::set<std::pair<int, int>> sphere_bonds;
  auto link = [&](int s, int t) {
    if (s != t) sphere_bonds.insert({std::min(s, t), std::max(s, t)});
  };
  for (const Bond& b : mol.bonds) {
    for (int s : owners[b.a])
      for (int t : owners[b.b]) link(s, t);
  }
  // Fused rings share atoms.
  for (int i = 0; i < n_atoms; ++i)
    for (std::size_t p = 0; p < owners[i].size(); ++p)
      for (std::size_t q = p + 1; q < owners[i].size(); ++q) link(owners[i][p], owners[i][q]);

  SphereSet s;
  s.centres.resize(3, static_cast<Eigen::Index>(centres.size()));
  s.radii.resize(static_cast<Eigen::Index>(radii.size()));
  for (std::size_t i = 0; i < centres.size(); ++i) {
    s.centres.col(static_cast<Eigen::Index>(i)) = centres[i];
    s.radii(static_cast<Eigen::Index>(i)) = radii[i];
  }
  s.origin = std::move(origin);
  s.bonds.assign(sphere_bonds.begin(), sphere_bonds.end());
  s.has_topology = true;
  return s;
}

}  // namespace kqmolsa
