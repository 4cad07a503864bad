#ifndef BIRKSEC_TEST_SUPPORT_HPP
#define BIRKSEC_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birksec/foliation.hpp"
#include "birksec/sections.hpp"

namespace birksec::testsupport {

// The standard sphere: one family of tori with constant diagonal flow,
// collapsing onto the two core orbits; the diagonal rational torus is a
// junction site.
inline FoliatedManifold round_sphere_manifold(int samples = 101) {
  TorusFamily f;
  f.id = 0;
  f.s_lo = 0.0;
  f.s_hi = 1.0;
  std::vector<DirectionSample> smp;
  for (int i = 0; i < samples; ++i) {
    const double s = (i + 0.5) / samples;
    smp.push_back({s, {1.0, 1.0}});
  }
  f.directions = DirectionSet::from_samples(smp);
  f.end_lo = TorusEnd::vertical();
  f.end_hi = TorusEnd::horizontal();
  f.rational_loci = {{0.5, {1, 1}}};
  FoliatedManifold m;
  m.families.push_back(f);
  return m;
}

// The figure-eight broken torus of the balance examples: one vertex, two
// edges, one face on the merged side, one face per loop on the other side.
// Face ids: 0 = merged (minus), 1 and 2 = loops (plus).
inline BrokenTorusGraph figure_eight_graph(
    BrokenTorusGraph::Orientation orientation = BrokenTorusGraph::Orientation::Vertical) {
  BrokenTorusGraph b;
  b.id = 0;
  b.orientation = orientation;
  b.vertices = {0};
  b.edges = {{0, 0, 0}, {1, 0, 0}};
  b.faces = {
      {0, BrokenFaceRec::Side::Minus, 0, {{0, 1}, {1, 1}}},
      {1, BrokenFaceRec::Side::Plus, 1, {{0, 1}}},
      {2, BrokenFaceRec::Side::Plus, 2, {{1, 1}}},
  };
  return b;
}

// Brute-force feasibility oracle for the face-edge assignment problem.
// Enumerates edge values in [-box, box] with per-face residual pruning; the
// peeling argument bounds any minimal solution by the sum of |face values|,
// so the default box is complete.
inline bool brute_force_assignment_feasible(
    const BrokenTorusGraph& b, const std::map<int, std::int64_t>& face_values,
    std::int64_t box = -1) {
  std::vector<int> edge_ids;
  for (const auto& e : b.edges) edge_ids.push_back(e.id);
  std::sort(edge_ids.begin(), edge_ids.end());
  if (box < 0) {
    box = 0;
    for (const auto& [f, v] : face_values) box += std::abs(v);
  }
  // Face -> (coefficients per edge slot, target).
  struct Eq {
    std::vector<std::int64_t> coeff;
    std::int64_t target;
  };
  std::vector<Eq> eqs;
  for (const auto& fc : b.faces) {
    Eq eq;
    eq.coeff.assign(edge_ids.size(), 0);
    for (const auto& use : fc.edges) {
      const auto slot = std::find(edge_ids.begin(), edge_ids.end(), use.edge) -
                        edge_ids.begin();
      eq.coeff[slot] += use.mult;
    }
    eq.target = face_values.at(fc.id);
    eqs.push_back(eq);
  }
  std::vector<std::int64_t> x(edge_ids.size(), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    // Prune: each equation must still be attainable with the free slots.
    for (const auto& eq : eqs) {
      std::int64_t fixed = 0, slack = 0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j < i) {
          fixed += eq.coeff[j] * x[j];
        } else {
          slack += std::abs(eq.coeff[j]) * box;
        }
      }
      if (std::abs(eq.target - fixed) > slack) return false;
    }
    if (i == x.size()) return true;
    for (std::int64_t v = -box; v <= box; ++v) {
      x[i] = v;
      if (rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

// All connected even multigraphs with <= max_edges edges, embedded on the
// sphere via rotation systems, with a valid two-sided face structure (each
// edge met by two distinct faces, dual bipartite). Used as the solver corpus.
inline std::vector<BrokenTorusGraph> broken_graph_corpus(int max_edges = 4) {
  std::vector<BrokenTorusGraph> corpus;
  std::set<std::string> seen;

  struct Dart {
    int edge;
    int vertex;   // origin of this dart
    int twin;     // index of the reverse dart
  };

  for (int V = 1; V <= max_edges; ++V) {
    // Enumerate edge multisets over labeled vertices (loops allowed).
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < V; ++u)
      for (int v = u; v < V; ++v) slots.push_back({u, v});
    std::vector<int> counts(slots.size(), 0);
    std::function<void(std::size_t, int)> gen_edges = [&](std::size_t slot, int left) {
      if (slot == slots.size()) {
        const int E = max_edges - left;
        if (E < 1) return;
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < slots.size(); ++i)
          for (int c = 0; c < counts[i]; ++c) edges.push_back(slots[i]);
        // Even degrees, all vertices used, connected.
        std::vector<int> deg(V, 0);
        for (auto [u, v] : edges) {
          deg[u]++;
          deg[v]++;
        }
        for (int d : deg)
          if (d == 0 || d % 2 != 0) return;
        std::vector<int> parent(V);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) {
          while (parent[a] != a) a = parent[a] = parent[parent[a]];
          return a;
        };
        for (auto [u, v] : edges) parent[find(u)] = find(v);
        for (int u = 1; u < V; ++u)
          if (find(u) != find(0)) return;

        // Darts and rotation-system enumeration.
        std::vector<Dart> darts;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
          const int a = static_cast<int>(darts.size());
          darts.push_back({e, edges[e].first, a + 1});
          darts.push_back({e, edges[e].second, a});
        }
        std::vector<std::vector<int>> at_vertex(V);
        for (int d = 0; d < static_cast<int>(darts.size()); ++d)
          at_vertex[darts[d].vertex].push_back(d);

        // All cyclic orders: fix the first dart of each vertex, permute the rest.
        std::vector<std::vector<int>> rotations(V);
        std::function<void(int)> gen_rot = [&](int v) {
          if (v == V) {
            // Trace faces: successor of dart d is the dart after twin(d) in
            // the rotation at its vertex.
            std::map<int, int> next_at;  // dart -> next in rotation cycle
            for (int u = 0; u < V; ++u) {
              const auto& rot = rotations[u];
              for (std::size_t i = 0; i < rot.size(); ++i)
                next_at[rot[i]] = rot[(i + 1) % rot.size()];
            }
            std::vector<int> face_of(darts.size(), -1);
            int F = 0;
            for (int d0 = 0; d0 < static_cast<int>(darts.size()); ++d0) {
              if (face_of[d0] != -1) continue;
              int d = d0;
              do {
                face_of[d] = F;
                d = next_at[darts[d].twin];
              } while (d != d0);
              ++F;
            }
            const int E = static_cast<int>(edges.size());
            if (V - E + F != 2) return;  // not a sphere embedding
            // Two-sided: the two darts of each edge lie in distinct faces.
            for (int e = 0; e < E; ++e) {
              if (face_of[2 * e] == face_of[2 * e + 1]) return;
            }
            // Dual bipartition.
            std::vector<int> color(F, -1);
            std::vector<std::vector<int>> adj(F);
            for (int e = 0; e < E; ++e) {
              adj[face_of[2 * e]].push_back(face_of[2 * e + 1]);
              adj[face_of[2 * e + 1]].push_back(face_of[2 * e]);
            }
            std::vector<int> stack = {0};
            color[0] = 0;
            while (!stack.empty()) {
              const int f = stack.back();
              stack.pop_back();
              for (int g : adj[f]) {
                if (color[g] == -1) {
                  color[g] = 1 - color[f];
                  stack.push_back(g);
                } else if (color[g] == color[f]) {
                  return;  // dual not bipartite: no two-sided structure
                }
              }
            }
            BrokenTorusGraph bt;
            bt.id = 0;
            bt.orientation = BrokenTorusGraph::Orientation::Vertical;
            for (int u = 0; u < V; ++u) bt.vertices.push_back(u);
            for (int e = 0; e < E; ++e) bt.edges.push_back({e, edges[e].first, edges[e].second});
            std::vector<std::vector<int>> face_edges(F);
            for (int e = 0; e < E; ++e) {
              face_edges[face_of[2 * e]].push_back(e);
              face_edges[face_of[2 * e + 1]].push_back(e);
            }
            for (int f = 0; f < F; ++f) {
              BrokenFaceRec rec;
              rec.id = f;
              rec.side = color[f] == 0 ? BrokenFaceRec::Side::Minus
                                       : BrokenFaceRec::Side::Plus;
              rec.family = f;
              std::sort(face_edges[f].begin(), face_edges[f].end());
              for (int e : face_edges[f]) rec.edges.push_back({e, 1});
              bt.faces.push_back(rec);
            }
            // Canonical signature for deduplication.
            std::string sig = std::to_string(V) + "|" + std::to_string(E) + "|";
            std::vector<std::string> fsigs;
            for (const auto& fc : bt.faces) {
              std::string fs = fc.side == BrokenFaceRec::Side::Minus ? "-" : "+";
              for (const auto& use : fc.edges) fs += std::to_string(use.edge) + ",";
              fsigs.push_back(fs);
            }
            std::sort(fsigs.begin(), fsigs.end());
            for (const auto& fs : fsigs) sig += fs + ";";
            if (seen.insert(sig).second) corpus.push_back(bt);
            return;
          }
          auto& rot = rotations[v];
          auto rest = at_vertex[v];
          if (rest.empty()) {
            gen_rot(v + 1);
            return;
          }
          const int first = rest.front();
          rest.erase(rest.begin());
          std::sort(rest.begin(), rest.end());
          do {
            rot.clear();
            rot.push_back(first);
            rot.insert(rot.end(), rest.begin(), rest.end());
            gen_rot(v + 1);
          } while (std::next_permutation(rest.begin(), rest.end()));
          rot.clear();
        };
        gen_rot(0);
        return;
      }
      for (int c = 0; c <= left; ++c) {
        counts[slot] = c;
        gen_edges(slot + 1, left - c);
      }
      counts[slot] = 0;
    };
    gen_edges(0, max_edges);
  }
  return corpus;
}

// Independent Euler-characteristic oracle: the disk-band spanning surface of
// the standard (P,Q) closed braid, chi = #disks - #bands, with the boundary
// component count read off the braid permutation. A k-fold plan is k copies.
struct DiskBandSurface {
  std::int64_t chi = 0;
  std::int64_t boundary_components = 0;
  std::int64_t genus2 = 0;  // 2*genus of the connected k=1 surface
};

inline DiskBandSurface disk_band_oracle(std::int64_t P, std::int64_t Q) {
  DiskBandSurface out;
  std::int64_t bands = 0;
  std::vector<std::int64_t> perm(P);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::int64_t rep = 0; rep < Q; ++rep) {
    for (std::int64_t i = 0; i + 1 < P; ++i) {
      std::swap(perm[i], perm[i + 1]);
      ++bands;
    }
  }
  out.chi = P - bands;
  std::vector<bool> visited(P, false);
  for (std::int64_t i = 0; i < P; ++i) {
    if (visited[i]) continue;
    ++out.boundary_components;
    std::int64_t j = i;
    while (!visited[j]) {
      visited[j] = true;
      j = perm[j];
    }
  }
  out.genus2 = 2 - out.boundary_components - out.chi;
  return out;
}

}  // namespace birksec::testsupport

#endif
