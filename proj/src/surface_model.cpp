#include "kqmolsa/surface_model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace kqmolsa {

double intersection_offset(double d, double r_i, double r_j) {
  return (d * d + r_i * r_i - r_j * r_j) / (2.0 * d);
}

IntersectionGraph build_adjacency(const SphereSet& input, AdjacencyMode mode) {
  const Eigen::Index n_in = input.size();
  if (n_in < 1) throw RejectedMolecule("empty", "empty sphere set");
  if ((input.radii.array() <= 0).any()) throw RejectedMolecule("radius", "sphere with non-positive radius");

  IntersectionGraph g;

  // Engulfed spheres (d <= |r_i - r_j|) contribute nothing to the surface.
  std::vector<bool> keep(static_cast<std::size_t>(n_in), true);
  for (Eigen::Index i = 0; i < n_in; ++i) {
    for (Eigen::Index j = 0; j < n_in; ++j) {
      if (i == j || !keep[j]) continue;
      const double d = (input.centres.col(i) - input.centres.col(j)).norm();
      const double ri = input.radii(i), rj = input.radii(j);
      const bool i_inside_j = d <= rj - ri && (ri < rj || (ri == rj && i > j));
      if (i_inside_j) {
        keep[i] = false;
        std::ostringstream msg;
        msg << "sphere " << i << " (r=" << ri << ") is engulfed by sphere " << j << " (r=" << rj
            << "); dropped";
        g.warnings.push_back(msg.str());
        break;
      }
    }
  }

  std::vector<Eigen::Index> new_index(static_cast<std::size_t>(n_in), -1);
  for (Eigen::Index i = 0; i < n_in; ++i)
    if (keep[i]) {
      new_index[i] = static_cast<Eigen::Index>(g.source_index.size());
      g.source_index.push_back(i);
    }
  const auto n = static_cast<Eigen::Index>(g.source_index.size());

  SphereSet& s = g.spheres;
  s.centres.resize(3, n);
  s.radii.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.centres.col(k) = input.centres.col(g.source_index[k]);
    s.radii(k) = input.radii(g.source_index[k]);
    s.origin.push_back(input.origin.empty() ? SphereOrigin::Atom : input.origin[g.source_index[k]]);
  }
  s.has_topology = input.has_topology;
  for (auto [a, b] : input.bonds)
    if (new_index[a] >= 0 && new_index[b] >= 0)
      s.bonds.emplace_back(static_cast<int>(new_index[a]), static_cast<int>(new_index[b]));

  const bool bonded = mode == AdjacencyMode::Bonded || (mode == AdjacencyMode::Auto && s.has_topology);
  std::set<std::pair<Eigen::Index, Eigen::Index>> bond_set;
  for (auto [a, b] : s.bonds) bond_set.insert({std::min(a, b), std::max(a, b)});

  g.T = Eigen::MatrixXi::Zero(n, n);
  g.lambda = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (s.centres.col(i) - s.centres.col(j)).norm();
      const double ri = s.radii(i), rj = s.radii(j);
      const bool proper = d < ri + rj && d > std::abs(ri - rj);
      if (!proper) continue;
      if (bonded && !bond_set.count({i, j})) continue;
      g.T(i, j) = g.T(j, i) = 1;
      g.lambda(i, j) = intersection_offset(d, ri, rj);
      g.lambda(j, i) = intersection_offset(d, rj, ri);
    }
  }

  // Connectivity.
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> q;
  q.push(0);
  seen[0] = true;
  Eigen::Index reached = 1;
  while (!q.empty()) {
    const Eigen::Index u = q.front();
    q.pop();
    for (Eigen::Index v = 0; v < n; ++v)
      if (g.T(u, v) && !seen[v]) {
        seen[v] = true;
        ++reached;
        q.push(v);
      }
  }
  if (reached != n)
    throw RejectedMolecule("disconnected", "sphere intersection graph is disconnected (" +
                                               std::to_string(reached) + " of " + std::to_string(n) +
                                               " spheres reachable)");
  return g;
}

double surface_area(const SphereSet& s, const IntersectionGraph& g) {
  double total = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double r = s.radii(i);
    double caps = 0;
    for (Eigen::Index j = 0; j < s.size(); ++j)
      if (g.T(i, j)) caps += std::abs(r - g.lambda(i, j));
    total += 2.0 * r * r - r * caps;
  }
  total *= 2.0 * kPi;
  if (!(total > 0)) throw RejectedMolecule("area", "non-positive surface area (pathological overlap)");
  return total;
}

std::vector<Eigen::Index> SurfaceGeometry::bfs_order() const {
  std::vector<Eigen::Index> order{base_index};
  for (std::size_t h = 0; h < order.size(); ++h)
    for (Eigen::Index c : children[order[h]]) order.push_back(c);
  return order;
}

SurfaceGeometry rescale_and_root(const IntersectionGraph& graph) {
  SurfaceGeometry geom;
  geom.area_original = surface_area(graph.spheres, graph);
  geom.scale_factor = std::sqrt(kFourPi / geom.area_original);

  geom.graph = graph;
  geom.graph.lambda *= geom.scale_factor;
  geom.spheres = graph.spheres;
  geom.spheres.centres *= geom.scale_factor;
  geom.spheres.radii *= geom.scale_factor;
  geom.graph.spheres = geom.spheres;

  const Eigen::Index n = geom.spheres.size();
  const Vec3 centroid = geom.spheres.centres.rowwise().mean();
  Eigen::Index best = 0;
  double best_d = (geom.spheres.centres.col(0) - centroid).norm();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double d = (geom.spheres.centres.col(i) - centroid).norm();
    if (d < best_d - 1e-12 * (1.0 + best_d)) {
      best_d = d;
      best = i;
    }
  }
  geom.base_index = best;

  geom.levels.assign(static_cast<std::size_t>(n), -1);
  geom.parent.assign(static_cast<std::size_t>(n), -1);
  geom.children.assign(static_cast<std::size_t>(n), {});
  std::queue<Eigen::Index> q;
  q.push(best);
  geom.levels[best] = 0;
  while (!q.empty()) {
    const Eigen::Index u = q.front();
    q.pop();
    for (Eigen::Index v = 0; v < n; ++v)
      if (graph.T(u, v) && geom.levels[v] < 0) {
        geom.levels[v] = geom.levels[u] + 1;
        q.push(v);
      }
  }
  for (Eigen::Index v = 0; v < n; ++v) {
    if (v == best) continue;
    for (Eigen::Index u = 0; u < n; ++u)
      if (graph.T(u, v) && geom.levels[u] == geom.levels[v] - 1) {
        geom.parent[v] = u;
        geom.children[u].push_back(v);
        break;
      }
  }

  double tree = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = geom.spheres.radii(i);
    double caps = 0;
    auto cap = [&](Eigen::Index j) { caps += std::abs(r - geom.graph.lambda(i, j)); };
    if (geom.parent[i] >= 0) cap(geom.parent[i]);
    for (Eigen::Index c : geom.children[i]) cap(c);
    tree += 2.0 * r * r - r * caps;
  }
  geom.tree_area = 2.0 * kPi * tree;
  return geom;
}

SurfaceGeometry build_surface(const SphereSet& spheres, AdjacencyMode mode) {
  return rescale_and_root(build_adjacency(spheres, mode));
}

}  // namespace kqmolsa
