#include "birksec/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>

namespace birksec {

const TorusFamily* FoliatedManifold::family(int id) const {
  for (const auto& f : families)
    if (f.id == id) return &f;
  return nullptr;
}

const BrokenTorusGraph* FoliatedManifold::broken_torus(int id) const {
  for (const auto& b : broken)
    if (b.id == id) return &b;
  return nullptr;
}

namespace {

std::string fam_loc(int id) { return "family " + std::to_string(id); }
std::string brk_loc(int id) { return "broken " + std::to_string(id); }

void validate_family(const TorusFamily& f, const FoliatedManifold& m,
                     std::vector<Diagnostic>& out) {
  if (!(f.s_lo < f.s_hi)) {
    out.push_back({fam_loc(f.id), "empty parameter interval"});
  }
  if (!f.directions.symbolic()) {
    if (f.directions.samples.empty()) {
      out.push_back({fam_loc(f.id), "direction sample list is empty"});
    }
    for (std::size_t i = 0; i < f.directions.samples.size(); ++i) {
      const auto& smp = f.directions.samples[i];
      if (std::hypot(smp.dir.a, smp.dir.b) == 0.0) {
        out.push_back({fam_loc(f.id), "zero direction sample"});
      }
      if (i > 0 && !(f.directions.samples[i - 1].s < smp.s)) {
        out.push_back({fam_loc(f.id), "sample parameters not strictly increasing"});
        break;
      }
    }
  }
  double prev_s = f.s_lo;
  for (const auto& locus : f.rational_loci) {
    if (!(locus.s > f.s_lo && locus.s < f.s_hi)) {
      out.push_back({fam_loc(f.id), "rational locus outside the open interval"});
    }
    if (!(locus.s > prev_s)) {
      out.push_back({fam_loc(f.id), "rational loci not strictly increasing"});
    }
    prev_s = locus.s;
    const auto& o = locus.orbit;
    if ((o.P == 0 && o.Q == 0) ||
        std::gcd(std::llabs(o.P), std::llabs(o.Q)) != 1) {
      out.push_back({fam_loc(f.id), "rational locus orbit class not primitive"});
      continue;
    }
    if (f.directions.symbolic()) {
      if (!((o.P > 0 && o.Q > 0) || (o.P < 0 && o.Q < 0))) {
        out.push_back({fam_loc(f.id),
                       "rational locus orbit not parallel to the open quadrant"});
      }
    } else if (!f.directions.samples.empty()) {
      const FlowDirection v = direction_at(f.directions, locus.s);
      if (admits_transverse_curve(o.as_class(), v, 1e-6)) {
        out.push_back({fam_loc(f.id),
                       "rational locus orbit not parallel to the flow at its s"});
      }
    }
  }
  for (const TorusEnd* end : {&f.end_lo, &f.end_hi}) {
    if (end->kind != TorusEnd::Kind::BrokenFace) continue;
    const BrokenTorusGraph* b = m.broken_torus(end->broken_id);
    if (b == nullptr) {
      out.push_back({fam_loc(f.id), "broken-face end names a missing broken torus"});
      continue;
    }
    const auto it = std::find_if(b->faces.begin(), b->faces.end(),
                                 [&](const BrokenFaceRec& fc) { return fc.id == end->face_id; });
    if (it == b->faces.end()) {
      out.push_back({fam_loc(f.id), "broken-face end names a missing face"});
    } else if (it->family != f.id) {
      out.push_back({fam_loc(f.id), "broken-face end not mutual with the face's family"});
    }
  }
}

void validate_broken(const BrokenTorusGraph& b, const FoliatedManifold& m,
                     bool allow_multiplicity, std::vector<Diagnostic>& out) {
  std::set<int> vset(b.vertices.begin(), b.vertices.end());
  if (vset.size() != b.vertices.size()) {
    out.push_back({brk_loc(b.id), "duplicate vertex ids"});
  }
  std::map<int, int> degree;
  std::set<int> eset;
  for (const auto& e : b.edges) {
    if (!eset.insert(e.id).second) {
      out.push_back({brk_loc(b.id), "duplicate edge ids"});
    }
    if (vset.count(e.from) == 0 || vset.count(e.to) == 0) {
      out.push_back({brk_loc(b.id), "edge references a missing vertex"});
      continue;
    }
    degree[e.from] += 1;
    degree[e.to] += 1;
  }
  for (int v : b.vertices) {
    if (degree[v] % 2 != 0) {
      out.push_back({brk_loc(b.id), "vertex " + std::to_string(v) + " has odd degree"});
    }
  }

  // Connectivity of the underlying multigraph.
  if (!b.vertices.empty()) {
    std::map<int, int> comp;
    for (int v : b.vertices) comp[v] = v;
    std::function<int(int)> find = [&](int v) {
      while (comp[v] != v) v = comp[v] = comp[comp[v]];
      return v;
    };
    for (const auto& e : b.edges) {
      if (vset.count(e.from) && vset.count(e.to)) comp[find(e.from)] = find(e.to);
    }
    std::set<int> roots;
    for (int v : b.vertices) roots.insert(find(v));
    if (roots.size() > 1) {
      out.push_back({brk_loc(b.id), "graph is not connected"});
    }
  }

  std::map<int, int> minus_use, plus_use;
  std::set<int> fset;
  for (const auto& fc : b.faces) {
    if (!fset.insert(fc.id).second) {
      out.push_back({brk_loc(b.id), "duplicate face ids"});
    }
    if (fc.edges.empty()) {
      out.push_back({brk_loc(b.id), "face " + std::to_string(fc.id) + " has no edges"});
    }
    for (const auto& use : fc.edges) {
      if (eset.count(use.edge) == 0) {
        out.push_back({brk_loc(b.id), "face references a missing edge"});
        continue;
      }
      if (use.mult < 1) {
        out.push_back({brk_loc(b.id), "nonpositive edge multiplicity"});
        continue;
      }
      (fc.side == BrokenFaceRec::Side::Minus ? minus_use : plus_use)[use.edge] += use.mult;
    }
    const TorusFamily* fam = m.family(fc.family);
    if (fam == nullptr) {
      out.push_back({brk_loc(b.id), "face " + std::to_string(fc.id) +
                                        " names a missing family"});
    } else {
      const bool lo_match = fam->end_lo.kind == TorusEnd::Kind::BrokenFace &&
                            fam->end_lo.broken_id == b.id && fam->end_lo.face_id == fc.id;
      const bool hi_match = fam->end_hi.kind == TorusEnd::Kind::BrokenFace &&
                            fam->end_hi.broken_id == b.id && fam->end_hi.face_id == fc.id;
      if (!lo_match && !hi_match) {
        out.push_back({brk_loc(b.id), "face " + std::to_string(fc.id) +
                                          " not claimed by its family's ends"});
      }
    }
  }
  for (const auto& e : b.edges) {
    const int mu = minus_use.count(e.id) ? minus_use.at(e.id) : 0;
    const int pu = plus_use.count(e.id) ? plus_use.at(e.id) : 0;
    const bool minus_ok = allow_multiplicity ? mu >= 1 : mu == 1;
    const bool plus_ok = allow_multiplicity ? pu >= 1 : pu == 1;
    if (!minus_ok) {
      out.push_back({brk_loc(b.id), "edge " + std::to_string(e.id) +
                                        " not used exactly once on the minus side"});
    }
    if (!plus_ok) {
      out.push_back({brk_loc(b.id), "edge " + std::to_string(e.id) +
                                        " not used exactly once on the plus side"});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_manifold(const FoliatedManifold& m,
                                          bool allow_multiplicity) {
  std::vector<Diagnostic> out;
  std::set<int> fam_ids;
  for (const auto& f : m.families) {
    if (!fam_ids.insert(f.id).second) {
      out.push_back({fam_loc(f.id), "duplicate family id"});
    }
    validate_family(f, m, out);
  }
  std::set<int> brk_ids;
  std::map<std::pair<int, int>, int> face_claims;
  for (const auto& b : m.broken) {
    if (!brk_ids.insert(b.id).second) {
      out.push_back({brk_loc(b.id), "duplicate broken torus id"});
    }
    validate_broken(b, m, allow_multiplicity, out);
  }
  for (const auto& f : m.families) {
    for (const TorusEnd* end : {&f.end_lo, &f.end_hi}) {
      if (end->kind == TorusEnd::Kind::BrokenFace) {
        face_claims[{end->broken_id, end->face_id}] += 1;
      }
    }
  }
  for (const auto& [key, n] : face_claims) {
    if (n > 1) {
      out.push_back({brk_loc(key.first), "face " + std::to_string(key.second) +
                                             " claimed by more than one family end"});
    }
  }
  for (const auto& b : m.broken) {
    for (const auto& fc : b.faces) {
      if (face_claims.count({b.id, fc.id}) == 0) {
        out.push_back({brk_loc(b.id), "face " + std::to_string(fc.id) +
                                          " not claimed by any family end"});
      }
    }
  }
  return out;
}

bool broken_balance_check(const BrokenTorusGraph& b,
                          const std::map<int, HomologyClass>& face_classes) {
  std::int64_t common = 0;
  bool first = true;
  std::int64_t minus_sum = 0, plus_sum = 0;
  const bool vertical = b.orientation == BrokenTorusGraph::Orientation::Vertical;
  for (const auto& fc : b.faces) {
    const auto it = face_classes.find(fc.id);
    if (it == face_classes.end()) {
      throw std::invalid_argument("missing class for face " + std::to_string(fc.id));
    }
    const auto& c = it->second;
    const std::int64_t fixed = vertical ? c.p : c.q;
    const std::int64_t summed = vertical ? c.q : c.p;
    if (first) {
      common = fixed;
      first = false;
    } else if (fixed != common) {
      return false;
    }
    (fc.side == BrokenFaceRec::Side::Minus ? minus_sum : plus_sum) += summed;
  }
  if (common == 0) return false;
  return minus_sum == plus_sum;
}

namespace {

// Exact integer solve of A x = v by unimodular column operations, yielding a
// particular solution and a kernel basis. Coefficients stay small for the
// face-edge systems this is used on.
struct IntegerSolve {
  bool feasible = false;
  std::vector<std::int64_t> particular;
  std::vector<std::vector<std::int64_t>> kernel;
};

IntegerSolve solve_integer_system(std::vector<std::vector<std::int64_t>> A,
                                  std::vector<std::int64_t> v) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows == 0 ? 0 : A[0].size();
  std::vector<std::vector<std::int64_t>> U(cols, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) U[i][i] = 1;

  auto col_combine = [&](std::size_t j1, std::size_t j2, std::int64_t u1,
                         std::int64_t u2, std::int64_t w1, std::int64_t w2) {
    // (col j1, col j2) <- (u1*j1 + u2*j2, w1*j1 + w2*j2), det = u1*w2 - u2*w1 = +-1
    for (std::size_t r = 0; r < rows; ++r) {
      const std::int64_t a = A[r][j1], b = A[r][j2];
      A[r][j1] = u1 * a + u2 * b;
      A[r][j2] = w1 * a + w2 * b;
    }
    for (std::size_t r = 0; r < cols; ++r) {
      const std::int64_t a = U[r][j1], b = U[r][j2];
      U[r][j1] = u1 * a + u2 * b;
      U[r][j2] = w1 * a + w2 * b;
    }
  };

  std::vector<std::int64_t> y(cols, 0);
  std::vector<bool> pivot_col(cols, false);
  std::size_t col = 0;
  IntegerSolve out;
  for (std::size_t r = 0; r < rows; ++r) {
    // Clear row r to a single entry in column `col` via gcd combinations.
    std::size_t j = col;
    while (j < cols && A[r][j] == 0) ++j;
    if (j == cols) {
      // No free entry: equation must already be satisfied.
      std::int64_t lhs = 0;
      for (std::size_t c = 0; c < col; ++c) lhs += A[r][c] * y[c];
      if (lhs != v[r]) return out;
      continue;
    }
    if (j != col) col_combine(col, j, 0, 1, 1, 0);  // swap
    for (j = col + 1; j < cols; ++j) {
      if (A[r][j] == 0) continue;
      std::int64_t a = A[r][col], b = A[r][j];
      // Extended gcd: g = s*a + t*b.
      std::int64_t s0 = 1, t0 = 0, s1 = 0, t1 = 1, x = a, yv = b;
      while (yv != 0) {
        const std::int64_t qd = x / yv;
        std::int64_t tmp = x - qd * yv; x = yv; yv = tmp;
        tmp = s0 - qd * s1; s0 = s1; s1 = tmp;
        tmp = t0 - qd * t1; t0 = t1; t1 = tmp;
      }
      const std::int64_t g = x;
      col_combine(col, j, s0, t0, -b / g, a / g);
    }
    std::int64_t lhs = 0;
    for (std::size_t c = 0; c < col; ++c) lhs += A[r][c] * y[c];
    const std::int64_t g = A[r][col];
    const std::int64_t rhs = v[r] - lhs;
    if (rhs % g != 0) return out;
    y[col] = rhs / g;
    pivot_col[col] = true;
    ++col;
    if (col == cols) {
      // Remaining equations must hold as-is.
      for (std::size_t rr = r + 1; rr < rows; ++rr) {
        std::int64_t check = 0;
        for (std::size_t c = 0; c < cols; ++c) check += A[rr][c] * y[c];
        if (check != v[rr]) return out;
      }
      break;
    }
  }
  out.feasible = true;
  out.particular.assign(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t k = 0; k < cols; ++k) out.particular[c] += U[c][k] * y[k];
  }
  for (std::size_t k = 0; k < cols; ++k) {
    if (pivot_col[k]) continue;
    std::vector<std::int64_t> basis(cols);
    for (std::size_t c = 0; c < cols; ++c) basis[c] = U[c][k];
    out.kernel.push_back(std::move(basis));
  }
  return out;
}

std::int64_t max_abs(const std::vector<std::int64_t>& x) {
  std::int64_t m = 0;
  for (auto v : x) m = std::max<std::int64_t>(m, std::llabs(v));
  return m;
}

// Search x0 + span(kernel) for the assignment minimizing max|x|, then
// lexicographic order. Exhaustive over a coefficient box; skipped for large
// kernels, where the particular solution is already deterministic.
std::vector<std::int64_t> tie_break(const IntegerSolve& sol) {
  std::vector<std::int64_t> best = sol.particular;
  const std::size_t d = sol.kernel.size();
  if (d == 0 || d > 4 || max_abs(best) > 64) return best;
  const std::int64_t C = max_abs(best) + 1;
  std::vector<std::int64_t> coeff(d, 0);
  std::vector<std::int64_t> cur(best.size());
  auto better = [](const std::vector<std::int64_t>& a,
                   const std::vector<std::int64_t>& b) {
    const std::int64_t ma = max_abs(a), mb = max_abs(b);
    if (ma != mb) return ma < mb;
    return a < b;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      for (std::size_t c = 0; c < cur.size(); ++c) {
        cur[c] = sol.particular[c];
        for (std::size_t k = 0; k < d; ++k) cur[c] += coeff[k] * sol.kernel[k][c];
      }
      if (better(cur, best)) best = cur;
      return;
    }
    for (std::int64_t t = -C; t <= C; ++t) {
      coeff[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

}  // namespace

std::optional<std::map<int, std::int64_t>> broken_edge_assignment(
    const BrokenTorusGraph& b, const std::map<int, std::int64_t>& face_values) {
  std::vector<int> edge_ids;
  for (const auto& e : b.edges) edge_ids.push_back(e.id);
  std::sort(edge_ids.begin(), edge_ids.end());
  std::map<int, std::size_t> edge_col;
  for (std::size_t i = 0; i < edge_ids.size(); ++i) edge_col[edge_ids[i]] = i;

  std::vector<std::vector<std::int64_t>> A;
  std::vector<std::int64_t> v;
  for (const auto& fc : b.faces) {
    const auto it = face_values.find(fc.id);
    if (it == face_values.end()) {
      throw std::invalid_argument("missing value for face " + std::to_string(fc.id));
    }
    std::vector<std::int64_t> row(edge_ids.size(), 0);
    for (const auto& use : fc.edges) row[edge_col.at(use.edge)] += use.mult;
    A.push_back(std::move(row));
    v.push_back(it->second);
  }

  const IntegerSolve sol = solve_integer_system(std::move(A), std::move(v));
  if (!sol.feasible) return std::nullopt;
  const auto x = tie_break(sol);
  std::map<int, std::int64_t> out;
  for (std::size_t i = 0; i < edge_ids.size(); ++i) out[edge_ids[i]] = x[i];
  return out;
}

std::int64_t end_boundary_multiplicity(const TorusEnd& end, const HomologyClass& c) {
  switch (end.kind) {
    case TorusEnd::Kind::VerticalOrbit:
      return std::llabs(c.q);
    case TorusEnd::Kind::HorizontalOrbit:
      return std::llabs(c.p);
    case TorusEnd::Kind::BrokenFace:
      break;
  }
  throw std::invalid_argument("broken-face end is not an orbit end");
}

JunctionTransition junction_multiplicity(const PrimitiveOrbitClass& orbit,
                                         const HomologyClass& c_minus,
                                         const HomologyClass& c_plus) {
  const HomologyClass d = c_plus - c_minus;
  const HomologyClass o = orbit.as_class();
  const bool plus_multiple =
      c_plus.p * o.q - c_plus.q * o.p == 0;  // includes c_plus == 0
  if (d.is_zero()) {
    if (plus_multiple) {
      return {JunctionTransition::Kind::Invalid, 0,
              "class parallel to the orbit on the rational torus"};
    }
    return {JunctionTransition::Kind::NoBoundary, 0, ""};
  }
  if (d.p * o.q - d.q * o.p != 0) {
    return {JunctionTransition::Kind::Invalid, 0,
            "class difference not parallel to the orbit class"};
  }
  const std::int64_t k = (o.p != 0) ? d.p / o.p : d.q / o.q;
  if (plus_multiple) {
    return {JunctionTransition::Kind::Invalid, 0,
            "class on the plus side is a multiple of the orbit class"};
  }
  return {JunctionTransition::Kind::Boundary, k, ""};
}

}  // namespace birksec
