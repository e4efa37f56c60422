// Smallest set of smallest rings.
//
// Horton's candidate set (for each vertex v and edge (x, y): the shortest path
// v..x, the edge, and the shortest path y..v) contains a minimum cycle basis;
// candidates are sorted by length and then by their sorted atom list and kept
// greedily when independent over GF(2).

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>

#include "kqmolsa/mol_ingest.hpp"

namespace kqmolsa {

namespace {

using EdgeBits = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> atoms;   // cycle in traversal order
  std::vector<int> sorted;  // for tie-breaking
  EdgeBits edges;
};

// Gaussian elimination basis over GF(2) keyed by pivot bit.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t n_bits) : words_((n_bits + 63) / 64) {}

  bool insert(EdgeBits v) {
    for (std::size_t w = words_; w-- > 0;) {
      while (v[w] != 0) {
        const int bit = 63 - __builtin_clzll(v[w]);
        const std::size_t pivot = w * 64 + static_cast<std::size_t>(bit);
        auto it = rows_.find(pivot);
        if (it == rows_.end()) {
          rows_.emplace(pivot, std::move(v));
          return true;
        }
        for (std::size_t k = 0; k < words_; ++k) v[k] ^= it->second[k];
      }
    }
    return false;
  }

 private:
  std::size_t words_;
  std::map<std::size_t, EdgeBits> rows_;
};

std::vector<int> canonical_order(std::vector<int> cycle) {
  auto lowest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), lowest, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1]) std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

}  // namespace

std::vector<std::vector<int>> detect_rings(const MoleculeRecord& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  std::map<std::pair<int, int>, std::size_t> edge_id;
  for (const Bond& b : mol.bonds) {
    if (is_hydrogen(mol.atoms[b.a].element) || is_hydrogen(mol.atoms[b.b].element)) continue;
    const auto key = std::make_pair(std::min(b.a, b.b), std::max(b.a, b.b));
    if (edge_id.count(key)) continue;
    edge_id.emplace(key, edge_id.size());
    adj[key.first].push_back(key.second);
    adj[key.second].push_back(key.first);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  // Cyclomatic number E - V + C over heavy atoms.
  int n_vertices = 0, n_components = 0;
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (is_hydrogen(mol.atoms[v].element)) continue;
    ++n_vertices;
    if (comp[v] >= 0) continue;
    std::queue<int> q;
    q.push(v);
    comp[v] = n_components;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (comp[w] < 0) {
          comp[w] = n_components;
          q.push(w);
        }
    }
    ++n_components;
  }
  const long nu = static_cast<long>(edge_id.size()) - n_vertices + n_components;
  if (nu <= 0) return {};

  const std::size_t n_edges = edge_id.size();
  auto edge_bit = [&](int a, int b) { return edge_id.at({std::min(a, b), std::max(a, b)}); };

  std::vector<Candidate> candidates;
  std::set<EdgeBits> seen;
  for (int v = 0; v < n; ++v) {
    if (adj[v].empty()) continue;
    // BFS tree with lowest-index parents.
    std::vector<int> dist(static_cast<std::size_t>(n), -1), parent(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    q.push(v);
    dist[v] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push(w);
        }
    }
    auto path_to = [&](int x) {
      std::vector<int> p;
      for (int u = x; u != -1; u = parent[u]) p.push_back(u);
      return p;  // x ... v
    };
    for (const auto& [key, id] : edge_id) {
      (void)id;
      const auto [x, y] = key;
      if (dist[x] < 0 || dist[y] < 0) continue;
      auto px = path_to(x);
      auto py = path_to(y);
      // Paths may only share v.
      std::set<int> sx(px.begin(), px.end());
      bool disjoint = true;
      for (std::size_t i = 0; i + 1 < py.size(); ++i)
        if (sx.count(py[i])) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;
      std::vector<int> cycle(px.rbegin(), px.rend());  // v ... x
      cycle.insert(cycle.end(), py.begin(), py.end() - 1);  // y ... (child of v)
      if (cycle.size() < 3) continue;
      EdgeBits bits((n_edges + 63) / 64, 0);
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const std::size_t e = edge_bit(cycle[i], cycle[(i + 1) % cycle.size()]);
        bits[e / 64] |= std::uint64_t{1} << (e % 64);
      }
      if (!seen.insert(bits).second) continue;
      Candidate c;
      c.atoms = canonical_order(cycle);
      c.sorted = c.atoms;
      std::sort(c.sorted.begin(), c.sorted.end());
      c.edges = std::move(bits);
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
    return a.sorted < b.sorted;
  });

  std::vector<std::vector<int>> rings;
  Gf2Basis basis(n_edges);
  for (auto& c : candidates) {
    if (static_cast<long>(rings.size()) == nu) break;
    if (basis.insert(c.edges)) rings.push_back(std::move(c.atoms));
  }
  return rings;
}

}  // namespace kqmolsa
