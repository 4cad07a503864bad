#include "birksec/sections.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>

namespace birksec {

namespace {

constexpr double kLocusMatchTol = 1e-9;

std::int64_t igcd(std::int64_t a, std::int64_t b) {
  return std::gcd(std::llabs(a), std::llabs(b));
}

bool is_multiple_of(const HomologyClass& c, const PrimitiveOrbitClass& o) {
  return c.p * o.Q - c.q * o.P == 0;
}

std::int64_t det_with_orbit(const HomologyClass& c, const PrimitiveOrbitClass& o) {
  return c.p * o.Q - c.q * o.P;
}

// Junction boundaries of a family, sorted by s.
std::vector<const BoundaryOrbit*> family_junctions(const SectionPlan& plan, int fam) {
  std::vector<const BoundaryOrbit*> out;
  for (const auto& b : plan.boundaries) {
    if (b.kind == BoundaryOrbit::Kind::RationalJunction && b.family_id == fam) {
      out.push_back(&b);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const BoundaryOrbit* a, const BoundaryOrbit* b) { return a->s < b->s; });
  return out;
}

// Strict-interior transversality margin of c over (a, b); the minimum
// normalized determinant over the samples inside, or over the interpolated
// midpoint direction when no sample falls inside.
double range_margin(const DirectionSet& d, const HomologyClass& c, double a, double b,
                    double* argmin = nullptr) {
  const double cn = std::hypot(static_cast<double>(c.p), static_cast<double>(c.q));
  if (cn == 0.0) return -1.0;
  if (d.symbolic()) {
    // Infimum over the open quadrant is attained toward the axes; report the
    // margin against the bisector as a representative interior value.
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 32; ++j) {
      const double t = std::numbers::pi / 2 * (j + 0.5) / 32;
      const FlowDirection v{std::cos(t), std::sin(t)};
      const double mrg = signed_area(c, v) / cn;
      if (mrg < worst) {
        worst = mrg;
        if (argmin) *argmin = t;
      }
    }
    return worst;
  }
  double worst = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& smp : d.samples) {
    if (smp.s <= a || smp.s >= b) continue;
    const double vn = std::hypot(smp.dir.a, smp.dir.b);
    const double mrg = signed_area(c, smp.dir) / (cn * vn);
    any = true;
    if (mrg < worst) {
      worst = mrg;
      if (argmin) *argmin = smp.s;
    }
  }
  if (!any) {
    const FlowDirection v = direction_at(d, (a + b) / 2);
    const double vn = std::hypot(v.a, v.b);
    if (argmin) *argmin = (a + b) / 2;
    return signed_area(c, v) / (cn * vn);
  }
  return worst;
}

struct FamilySegments {
  std::vector<double> cuts;  // s_lo, junction s's..., s_hi
  std::vector<const BoundaryOrbit*> junctions;
};

FamilySegments segments_of(const TorusFamily& f, const SectionPlan& plan) {
  FamilySegments out;
  out.junctions = family_junctions(plan, f.id);
  out.cuts.push_back(f.s_lo);
  for (const auto* j : out.junctions) out.cuts.push_back(j->s);
  out.cuts.push_back(f.s_hi);
  return out;
}

}  // namespace

PlanCheck plan_is_valid(const FoliatedManifold& m, const SectionPlan& plan) {
  const auto manifold_diags = validate_manifold(m);
  if (!manifold_diags.empty()) {
    throw std::invalid_argument("plan_is_valid requires a valid manifold: " +
                                manifold_diags.front().message);
  }
  PlanCheck check;
  auto fail = [&](std::string loc, std::string msg) {
    check.diagnostics.push_back({std::move(loc), std::move(msg)});
  };

  std::set<const BoundaryOrbit*> seen;
  for (const auto& b : plan.boundaries) {
    if (b.multiplicity < 1) {
      fail("boundaries", "boundary orbit with nonpositive multiplicity");
    }
    switch (b.kind) {
      case BoundaryOrbit::Kind::OrbitEnd:
      case BoundaryOrbit::Kind::RationalJunction:
        if (m.family(b.family_id) == nullptr) {
          throw std::invalid_argument("boundary references missing family " +
                                      std::to_string(b.family_id));
        }
        break;
      case BoundaryOrbit::Kind::BrokenOrbit: {
        const auto* bt = m.broken_torus(b.broken_id);
        if (bt == nullptr) {
          throw std::invalid_argument("boundary references missing broken torus");
        }
        if (std::find(bt->vertices.begin(), bt->vertices.end(), b.vertex_id) ==
            bt->vertices.end()) {
          throw std::invalid_argument("broken-orbit boundary names a missing vertex");
        }
        break;
      }
    }
  }

  std::map<int, HomologyClass> facing_class_by_face_key;  // (broken<<16)|face
  for (const auto& f : m.families) {
    const std::string loc = "family " + std::to_string(f.id);
    const auto it = plan.segment_classes.find(f.id);
    if (it == plan.segment_classes.end() || it->second.empty()) {
      fail(loc, "no segment classes for the family");
      continue;
    }
    const auto& classes = it->second;
    const FamilySegments seg = segments_of(f, plan);
    if (classes.size() != seg.junctions.size() + 1) {
      fail(loc, "segment count does not match recorded junctions");
      continue;
    }

    // Clause (a): every class positively transverse on its open segment.
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i].is_zero()) {
        fail(loc, "zero class on a segment");
        continue;
      }
      const double mrg = range_margin(f.directions, classes[i], seg.cuts[i], seg.cuts[i + 1]);
      if (!(mrg > kParallelTol)) {
        fail(loc, "segment " + std::to_string(i) + " class " + to_string(classes[i]) +
                      " not positively transverse (clause: admissible cone)");
      }
    }

    // Clause (c): junction arithmetic at recorded junctions, and every
    // junction must sit on a registered rational locus.
    for (std::size_t j = 0; j < seg.junctions.size(); ++j) {
      const auto* jb = seg.junctions[j];
      const auto locus = std::find_if(
          f.rational_loci.begin(), f.rational_loci.end(), [&](const RationalLocus& l) {
            return std::abs(l.s - jb->s) <= kLocusMatchTol &&
                   (l.orbit == jb->orbit ||
                    (l.orbit.P == -jb->orbit.P && l.orbit.Q == -jb->orbit.Q));
          });
      if (locus == f.rational_loci.end()) {
        fail(loc, "junction at s=" + std::to_string(jb->s) +
                      " does not match a rational locus");
        continue;
      }
      const auto jt = junction_multiplicity(jb->orbit, classes[j], classes[j + 1]);
      if (jt.kind != JunctionTransition::Kind::Boundary) {
        fail(loc, "junction at s=" + std::to_string(jb->s) + " invalid: " +
                      (jt.kind == JunctionTransition::Kind::NoBoundary
                           ? "classes do not change"
                           : jt.reason) +
                      " (clause: rational junction)");
        continue;
      }
      if (std::llabs(jt.k) != jb->multiplicity) {
        fail(loc, "junction multiplicity mismatch (clause: rational junction)");
      }
    }

    // Prop 2.7 clause: a passed rational locus must not carry a class that is
    // a multiple of its orbit.
    for (const auto& l : f.rational_loci) {
      const bool is_junction =
          std::any_of(seg.junctions.begin(), seg.junctions.end(), [&](const BoundaryOrbit* b) {
            return std::abs(b->s - l.s) <= kLocusMatchTol;
          });
      if (is_junction) continue;
      std::size_t i = 0;
      while (i + 1 < seg.cuts.size() && !(l.s > seg.cuts[i] && l.s < seg.cuts[i + 1])) ++i;
      if (i + 1 >= seg.cuts.size()) continue;
      if (is_multiple_of(classes[i], l.orbit)) {
        fail(loc, "class is a multiple of the orbit at a passed rational torus "
                  "(clause: forbidden multiples)");
      }
    }

    // Clause (b): orbit-end boundaries recorded iff the multiplicity rule is
    // nonzero, with the exact multiplicity.
    for (const bool hi : {false, true}) {
      const TorusEnd& end = hi ? f.end_hi : f.end_lo;
      const HomologyClass& adj = hi ? classes.back() : classes.front();
      if (end.kind == TorusEnd::Kind::BrokenFace) {
        facing_class_by_face_key[(end.broken_id << 16) | end.face_id] = adj;
        continue;
      }
      const std::int64_t mult = end_boundary_multiplicity(end, adj);
      const auto rec = std::find_if(
          plan.boundaries.begin(), plan.boundaries.end(), [&](const BoundaryOrbit& b) {
            return b.kind == BoundaryOrbit::Kind::OrbitEnd && b.family_id == f.id &&
                   b.at_hi_end == hi;
          });
      if (mult == 0 && rec != plan.boundaries.end()) {
        fail(loc, "boundary recorded at a closed orbit end (clause: end multiplicity)");
      }
      if (mult != 0) {
        if (rec == plan.boundaries.end()) {
          fail(loc, "missing boundary at an orbit end of multiplicity " +
                        std::to_string(mult) + " (clause: end multiplicity)");
        } else if (rec->multiplicity != mult) {
          fail(loc, "orbit-end boundary multiplicity mismatch (clause: end multiplicity)");
        }
      }
    }
  }

  // Clauses (d)/(e): broken tori are balanced and unmarked, or unbalanced and
  // marked with a broken-orbit boundary.
  for (const auto& b : m.broken) {
    std::map<int, HomologyClass> face_classes;
    bool complete = true;
    for (const auto& fc : b.faces) {
      const auto it = facing_class_by_face_key.find((b.id << 16) | fc.id);
      if (it == facing_class_by_face_key.end()) {
        complete = false;
        break;
      }
      face_classes[fc.id] = it->second;
    }
    const std::string loc = "broken " + std::to_string(b.id);
    if (!complete) {
      fail(loc, "missing facing classes for the broken torus");
      continue;
    }
    const bool balanced = broken_balance_check(b, face_classes);
    const bool marked =
        std::any_of(plan.boundaries.begin(), plan.boundaries.end(), [&](const BoundaryOrbit& bo) {
          return bo.kind == BoundaryOrbit::Kind::BrokenOrbit && bo.broken_id == b.id;
        });
    if (balanced && marked) {
      fail(loc, "broken orbit recorded although the balance equations hold "
                "(clause: broken balance)");
    }
    if (!balanced && !marked) {
      fail(loc, "balance equations fail and no broken-orbit boundary is recorded "
                "(clause: broken balance)");
    }
  }

  check.valid = check.diagnostics.empty();
  return check;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

SurfaceTopology plan_surface_topology(const FoliatedManifold& m, const SectionPlan& plan) {
  SurfaceTopology topo;
  std::int64_t chi = 0;
  std::int64_t circles = 0;

  // Sheet table: per (family, segment) a contiguous block of gcd-many sheets.
  std::map<std::pair<int, std::size_t>, std::pair<int, std::int64_t>> sheet_block;
  int next = 0;
  for (const auto& f : m.families) {
    const auto it = plan.segment_classes.find(f.id);
    if (it == plan.segment_classes.end()) continue;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const std::int64_t l = gcd_components(it->second[i]).count;
      sheet_block[{f.id, i}] = {next, l};
      next += static_cast<int>(l);
    }
  }
  // Extra anchor nodes for junction and broken-torus gluings.
  const int anchors_base = next;
  std::vector<int> anchor_nodes;
  auto new_anchors = [&](std::int64_t n) {
    const int base = anchors_base + static_cast<int>(anchor_nodes.size());
    for (std::int64_t i = 0; i < n; ++i) anchor_nodes.push_back(base + static_cast<int>(i));
    return base;
  };
  // Union-find sized later; collect operations first.
  std::vector<std::pair<int, int>> unions;

  for (const auto& f : m.families) {
    const auto it = plan.segment_classes.find(f.id);
    if (it == plan.segment_classes.end()) continue;
    const auto& classes = it->second;
    const auto seg = segments_of(f, plan);

    // Orbit ends: caps (chi) or boundary circles.
    for (const bool hi : {false, true}) {
      const TorusEnd& end = hi ? f.end_hi : f.end_lo;
      if (end.kind == TorusEnd::Kind::BrokenFace) continue;
      const HomologyClass& adj = hi ? classes.back() : classes.front();
      const std::int64_t l = gcd_components(adj).count;
      if (end_boundary_multiplicity(end, adj) == 0) {
        chi += l;
      } else {
        circles += l;
      }
    }

    // Junction gluings between consecutive segments.
    for (std::size_t j = 0; j < seg.junctions.size(); ++j) {
      const auto* jb = seg.junctions[j];
      const HomologyClass& c_lo = classes[j];
      const HomologyClass& c_hi = classes[j + 1];
      const std::int64_t alpha = std::llabs(det_with_orbit(c_lo, jb->orbit));
      const std::int64_t l_lo = gcd_components(c_lo).count;
      const std::int64_t l_hi = gcd_components(c_hi).count;
      const std::int64_t gamma =
          std::max<std::int64_t>(1, igcd(igcd(jb->multiplicity, alpha), igcd(l_lo, l_hi)));
      chi -= alpha;
      circles += gamma;
      const int base = new_anchors(gamma);
      const auto [lo_base, lo_n] = sheet_block.at({f.id, j});
      const auto [hi_base, hi_n] = sheet_block.at({f.id, j + 1});
      for (std::int64_t t = 0; t < lo_n; ++t) {
        unions.emplace_back(lo_base + static_cast<int>(t), base + static_cast<int>(t % gamma));
      }
      for (std::int64_t t = 0; t < hi_n; ++t) {
        unions.emplace_back(hi_base + static_cast<int>(t), base + static_cast<int>(t % gamma));
      }
    }
  }

  // Broken tori: transverse crossings glue, marked ones contribute circles.
  for (const auto& b : m.broken) {
    std::int64_t marked_mult = 0;
    bool marked = false;
    for (const auto& bo : plan.boundaries) {
      if (bo.kind == BoundaryOrbit::Kind::BrokenOrbit && bo.broken_id == b.id) {
        marked = true;
        marked_mult += bo.multiplicity;
      }
    }
    if (marked) {
      circles += marked_mult;
      continue;
    }
    const bool vertical = b.orientation == BrokenTorusGraph::Orientation::Vertical;
    std::int64_t w0 = 0, sum = 0;
    std::vector<std::pair<int, std::size_t>> facing;  // (family, segment index)
    for (const auto& fc : b.faces) {
      const TorusFamily* fam = m.family(fc.family);
      const auto it = plan.segment_classes.find(fc.family);
      if (fam == nullptr || it == plan.segment_classes.end()) continue;
      const bool at_lo = fam->end_lo.kind == TorusEnd::Kind::BrokenFace &&
                         fam->end_lo.broken_id == b.id && fam->end_lo.face_id == fc.id;
      const std::size_t idx = at_lo ? 0 : it->second.size() - 1;
      const HomologyClass& c = it->second[idx];
      w0 = vertical ? c.p : c.q;
      if (fc.side == BrokenFaceRec::Side::Minus) sum += vertical ? c.q : c.p;
      facing.emplace_back(fc.family, idx);
    }
    const std::int64_t V = static_cast<std::int64_t>(b.vertices.size());
    const std::int64_t E = static_cast<std::int64_t>(b.edges.size());
    chi += std::llabs(w0) * (V - E);
    const std::int64_t gammaB =
        sum == 0 ? std::llabs(w0) : std::max<std::int64_t>(1, igcd(w0, sum));
    const int base = new_anchors(std::max<std::int64_t>(1, gammaB));
    for (const auto& [fid, idx] : facing) {
      const auto [sheet_base, n] = sheet_block.at({fid, idx});
      for (std::int64_t t = 0; t < n; ++t) {
        unions.emplace_back(sheet_base + static_cast<int>(t),
                            base + static_cast<int>(t % std::max<std::int64_t>(1, gammaB)));
      }
    }
  }

  UnionFind uf2(anchors_base + static_cast<int>(anchor_nodes.size()));
  for (const auto& [a, bnode] : unions) uf2.unite(a, bnode);
  std::set<int> roots;
  for (int i = 0; i < next; ++i) roots.insert(uf2.find(i));
  const int components = static_cast<int>(roots.size());

  topo.euler_characteristic = static_cast<int>(chi);
  topo.boundary_circles = static_cast<int>(circles);
  topo.components = components;
  topo.genus2 = 2 * static_cast<std::int64_t>(components) - circles - chi;
  return topo;
}

int euler_characteristic_of_plan(const FoliatedManifold& m, const SectionPlan& plan) {
  const auto check = plan_is_valid(m, plan);
  if (!check.valid) {
    throw std::invalid_argument("euler characteristic of an invalid plan: " +
                                check.diagnostics.front().message);
  }
  return plan_surface_topology(m, plan).euler_characteristic;
}

std::int64_t genus_of_plan(const FoliatedManifold& m, const SectionPlan& plan) {
  const auto check = plan_is_valid(m, plan);
  if (!check.valid) {
    throw std::invalid_argument("genus of an invalid plan: " +
                                check.diagnostics.front().message);
  }
  const auto topo = plan_surface_topology(m, plan);
  if (!topo.genus_integral()) {
    throw std::domain_error("plan genus is not an integer: inconsistent plan");
  }
  if (topo.genus2 < 0) {
    throw std::domain_error("plan genus is negative: inconsistent plan");
  }
  return topo.genus2 / 2;
}

NumericReport verify_plan_numeric(const FoliatedManifold& m, const SectionPlan& plan,
                                  int samples_per_segment, double tol) {
  NumericReport report;
  report.tolerance = tol;
  report.min_margin = std::numeric_limits<double>::infinity();
  bool pass = true;

  for (const auto& f : m.families) {
    const auto it = plan.segment_classes.find(f.id);
    if (it == plan.segment_classes.end()) continue;
    const auto& classes = it->second;
    const auto seg = segments_of(f, plan);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const HomologyClass& c = classes[i];
      const double cn = std::hypot(static_cast<double>(c.p), static_cast<double>(c.q));
      SegmentMargin sm;
      sm.family = f.id;
      sm.segment_index = static_cast<int>(i);
      sm.min_margin = std::numeric_limits<double>::infinity();
      const double a = seg.cuts[i], b = seg.cuts[i + 1];
      for (int j = 0; j < samples_per_segment; ++j) {
        FlowDirection v;
        double where;
        if (f.directions.symbolic()) {
          where = std::numbers::pi / 2 * (j + 0.5) / samples_per_segment;
          v = {std::cos(where), std::sin(where)};
        } else {
          where = a + (b - a) * (j + 0.5) / samples_per_segment;
          v = direction_at(f.directions, where);
        }
        const double vn = std::hypot(v.a, v.b);
        const double mrg = signed_area(c, v) / (cn * vn);
        if (mrg < sm.min_margin) {
          sm.min_margin = mrg;
          sm.argmin_s = where;
        }
      }
      if (!(sm.min_margin > tol)) pass = false;
      report.min_margin = std::min(report.min_margin, sm.min_margin);
      report.segments.push_back(sm);
    }
    for (std::size_t j = 0; j < seg.junctions.size(); ++j) {
      const auto* jb = seg.junctions[j];
      JunctionDegeneration jd;
      jd.family = f.id;
      jd.s = jb->s;
      if (!f.directions.symbolic()) {
        const FlowDirection v = direction_at(f.directions, jb->s);
        const HomologyClass& c = classes[j];
        const double cn = std::hypot(static_cast<double>(c.p), static_cast<double>(c.q));
        const double vn = std::hypot(v.a, v.b);
        jd.margin_at_junction = std::abs(signed_area(c, v)) / (cn * vn);
      } else {
        jd.margin_at_junction = 0.0;
      }
      const double before = range_margin(f.directions, classes[j], seg.cuts[j], jb->s);
      const double after = range_margin(f.directions, classes[j + 1], jb->s, seg.cuts[j + 2]);
      jd.sign_consistent = before > tol && after > tol;
      report.junctions.push_back(jd);
    }
  }
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

namespace {

struct ClassBox {
  std::int64_t bound;
  int side;  // 2*bound + 1
  explicit ClassBox(std::int64_t b) : bound(b), side(static_cast<int>(2 * b + 1)) {}
  int size() const { return side * side; }
  int index(const HomologyClass& c) const {
    return static_cast<int>(c.p + bound) * side + static_cast<int>(c.q + bound);
  }
  HomologyClass declass(int idx) const {
    return {idx / side - bound, idx % side - bound};
  }
  bool inside(const HomologyClass& c) const {
    return std::llabs(c.p) <= bound && std::llabs(c.q) <= bound;
  }
};

struct Cost {
  std::int64_t boundaries = 0;
  std::int64_t mult = 0;
  std::int64_t surrogate = 0;  // -(boundary circles + chi), family-local parts

  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.boundaries != b.boundaries) return a.boundaries < b.boundaries;
    if (a.mult != b.mult) return a.mult < b.mult;
    return a.surrogate < b.surrogate;
  }
  Cost operator+(const Cost& o) const {
    return {boundaries + o.boundaries, mult + o.mult, surrogate + o.surrogate};
  }
};

struct FamilyCandidate {
  std::vector<HomologyClass> classes;             // per segment
  std::vector<std::pair<std::size_t, std::int64_t>> jumps;  // (locus index, k)
  Cost cost;
  HomologyClass lo_class, hi_class;
};

// Dynamic program over the rational loci of one family. Enumerates, for
// every budget of junctions, the best candidate per (first, last) class pair.
std::vector<FamilyCandidate> family_candidates(const TorusFamily& f, const ClassBox& box,
                                               std::int64_t max_junctions) {
  const std::size_t J = f.rational_loci.size();
  const int n = box.size();

  // Valid classes per inter-locus interval.
  std::vector<double> cuts;
  cuts.push_back(f.s_lo);
  for (const auto& l : f.rational_loci) cuts.push_back(l.s);
  cuts.push_back(f.s_hi);
  std::vector<std::vector<char>> valid(J + 1, std::vector<char>(n, 0));
  for (std::size_t i = 0; i <= J; ++i) {
    for (int idx = 0; idx < n; ++idx) {
      const HomologyClass c = box.declass(idx);
      if (c.is_zero()) continue;
      valid[i][idx] = range_margin(f.directions, c, cuts[i], cuts[i + 1]) > kParallelTol;
    }
  }

  const std::int64_t jcap = std::min<std::int64_t>(max_junctions, static_cast<std::int64_t>(J));
  struct State {
    bool reachable = false;
    Cost cost;
    int prev_class = -1;
    std::int64_t k = 0;
  };
  // dp[pos][junctions][class]
  std::vector<std::vector<std::vector<State>>> dp(
      J + 1, std::vector<std::vector<State>>(jcap + 1, std::vector<State>(n)));

  const bool lo_orbit = f.end_lo.kind != TorusEnd::Kind::BrokenFace;
  const bool hi_orbit = f.end_hi.kind != TorusEnd::Kind::BrokenFace;

  for (int idx = 0; idx < n; ++idx) {
    if (!valid[0][idx]) continue;
    const HomologyClass c = box.declass(idx);
    Cost cost{};
    if (lo_orbit) {
      const std::int64_t mlt = end_boundary_multiplicity(f.end_lo, c);
      const std::int64_t l = gcd_components(c).count;
      if (mlt != 0) {
        cost.boundaries += 1;
        cost.mult += mlt;
        cost.surrogate -= l;  // boundary circles
      } else {
        cost.surrogate -= l;  // cap contributes chi
      }
    }
    dp[0][0][idx] = {true, cost, -1, 0};
  }

  for (std::size_t pos = 0; pos < J; ++pos) {
    const auto& locus = f.rational_loci[pos];
    const HomologyClass o = locus.orbit.as_class();
    for (std::int64_t used = 0; used <= jcap; ++used) {
      for (int idx = 0; idx < n; ++idx) {
        const State& st = dp[pos][used][idx];
        if (!st.reachable) continue;
        const HomologyClass c = box.declass(idx);
        // Pass through: class must avoid being a multiple of the orbit.
        if (!is_multiple_of(c, locus.orbit) && valid[pos + 1][idx]) {
          State& dst = dp[pos + 1][used][idx];
          if (!dst.reachable || st.cost < dst.cost) dst = {true, st.cost, idx, 0};
        }
        if (used == jcap) continue;
        // Jump by k times the orbit class.
        const std::int64_t alpha = std::llabs(det_with_orbit(c, locus.orbit));
        if (alpha == 0) continue;  // c is a multiple: no valid junction either
        const std::int64_t l_lo = gcd_components(c).count;
        const std::int64_t step = std::max<std::int64_t>(1, std::max(std::llabs(o.p), std::llabs(o.q)));
        const std::int64_t kmax = 2 * box.bound / step + 1;
        for (std::int64_t k = -kmax; k <= kmax; ++k) {
          if (k == 0) continue;
          const HomologyClass c2 = c + k * o;
          if (!box.inside(c2) || c2.is_zero()) continue;
          const int idx2 = box.index(c2);
          if (!valid[pos + 1][idx2]) continue;
          const std::int64_t l_hi = gcd_components(c2).count;
          const std::int64_t gamma =
              std::max<std::int64_t>(1, igcd(igcd(k, alpha), igcd(l_lo, l_hi)));
          Cost cost = st.cost;
          cost.boundaries += 1;
          cost.mult += std::llabs(k);
          cost.surrogate += alpha - gamma;  // chi -= alpha, circles += gamma
          State& dst = dp[pos + 1][used + 1][idx2];
          if (!dst.reachable || cost < dst.cost) dst = {true, cost, idx, k};
        }
      }
    }
  }

  // Collect final states, fold the hi-end cost, reconstruct candidates.
  std::vector<FamilyCandidate> out;
  std::map<std::pair<int, int>, std::size_t> best_by_key;
  for (std::int64_t used = 0; used <= jcap; ++used) {
    for (int idx = 0; idx < n; ++idx) {
      const State& st = dp[J][used][idx];
      if (!st.reachable) continue;
      const HomologyClass c = box.declass(idx);
      Cost cost = st.cost;
      if (hi_orbit) {
        const std::int64_t mlt = end_boundary_multiplicity(f.end_hi, c);
        const std::int64_t l = gcd_components(c).count;
        if (mlt != 0) {
          cost.boundaries += 1;
          cost.mult += mlt;
          cost.surrogate -= l;
        } else {
          cost.surrogate -= l;
        }
      }
      FamilyCandidate cand;
      cand.cost = cost;
      cand.hi_class = c;
      // Walk back through the dp to recover the class sequence.
      std::vector<HomologyClass> rev_classes;
      std::vector<std::pair<std::size_t, std::int64_t>> rev_jumps;
      int cur = idx;
      std::int64_t cur_used = used;
      rev_classes.push_back(c);
      for (std::size_t pos = J; pos > 0; --pos) {
        const State& s = dp[pos][cur_used][cur];
        if (s.k != 0) {
          rev_jumps.emplace_back(pos - 1, s.k);
          --cur_used;
          cur = s.prev_class;
          rev_classes.push_back(box.declass(cur));
        } else {
          cur = s.prev_class;
        }
      }
      std::reverse(rev_classes.begin(), rev_classes.end());
      std::reverse(rev_jumps.begin(), rev_jumps.end());
      cand.classes = std::move(rev_classes);
      cand.jumps = std::move(rev_jumps);
      cand.lo_class = cand.classes.front();

      const int lo_key = f.end_lo.kind == TorusEnd::Kind::BrokenFace ? box.index(cand.lo_class) : -1;
      const int hi_key = f.end_hi.kind == TorusEnd::Kind::BrokenFace ? box.index(cand.hi_class) : -1;
      const auto key = std::make_pair(lo_key, hi_key);
      const auto it = best_by_key.find(key);
      if (it == best_by_key.end()) {
        best_by_key[key] = out.size();
        out.push_back(std::move(cand));
      } else if (cand.cost < out[it->second].cost) {
        out[it->second] = std::move(cand);
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const FamilyCandidate& a, const FamilyCandidate& b) {
    if (!(a.cost < b.cost) && !(b.cost < a.cost)) {
      if (a.lo_class.p != b.lo_class.p) return a.lo_class.p < b.lo_class.p;
      if (a.lo_class.q != b.lo_class.q) return a.lo_class.q < b.lo_class.q;
      if (a.hi_class.p != b.hi_class.p) return a.hi_class.p < b.hi_class.p;
      return a.hi_class.q < b.hi_class.q;
    }
    return a.cost < b.cost;
  });
  return out;
}

struct BrokenInfo {
  const BrokenTorusGraph* graph;
  bool vertical;
  // (family, face id, minus side, faces at lo end of the family)
  struct FaceRef {
    int face_id;
    int family;
    bool minus;
  };
  std::vector<FaceRef> faces;
};

}  // namespace

std::optional<SectionPlan> synthesize_section(const FoliatedManifold& m,
                                              const SynthesisObjective& obj) {
  {
    const auto diags = validate_manifold(m);
    if (!diags.empty()) {
      throw std::invalid_argument("synthesize_section requires a valid manifold: " +
                                  diags.front().message);
    }
  }
  if (m.families.empty()) return std::nullopt;
  const ClassBox box(obj.bound);

  std::vector<const TorusFamily*> fams;
  for (const auto& f : m.families) fams.push_back(&f);
  std::sort(fams.begin(), fams.end(),
            [](const TorusFamily* a, const TorusFamily* b) { return a->id < b->id; });

  std::vector<BrokenInfo> brokens;
  for (const auto& b : m.broken) {
    BrokenInfo info;
    info.graph = &b;
    info.vertical = b.orientation == BrokenTorusGraph::Orientation::Vertical;
    for (const auto& fc : b.faces) {
      info.faces.push_back({fc.id, fc.family, fc.side == BrokenFaceRec::Side::Minus});
    }
    brokens.push_back(info);
  }
  if (brokens.size() > 16) {
    throw std::invalid_argument("too many broken tori for synthesis");
  }

  // Total junction capacity bounds the deepening.
  std::int64_t t_max = static_cast<std::int64_t>(brokens.size());
  for (const auto* f : fams) {
    t_max += static_cast<std::int64_t>(f->rational_loci.size()) + 2;
  }
  t_max = std::min<std::int64_t>(t_max, 64);

  // Candidate lists are junction-capped by the boundary budget; cache per cap.
  std::map<std::pair<int, std::int64_t>, std::vector<FamilyCandidate>> cand_cache;
  auto candidates_for = [&](const TorusFamily* f, std::int64_t cap)
      -> const std::vector<FamilyCandidate>& {
    const std::int64_t eff = std::min<std::int64_t>(
        cap, static_cast<std::int64_t>(f->rational_loci.size()));
    const auto key = std::make_pair(f->id, eff);
    auto it = cand_cache.find(key);
    if (it == cand_cache.end()) {
      it = cand_cache.emplace(key, family_candidates(*f, box, eff)).first;
    }
    return it->second;
  };

  struct Best {
    bool found = false;
    Cost cost;
    std::int64_t genus2 = 0;
    SectionPlan plan;
    std::string lex;
  };
  Best best;

  // Face key -> position in the assignment bookkeeping.
  struct BrokenState {
    bool pinned = false;
    std::int64_t common = 0;   // p0 (vertical) or q0 (horizontal)
    std::int64_t minus_sum = 0;
    std::int64_t plus_sum = 0;
    int assigned = 0;
  };

  auto serialize = [](const SectionPlan& p) {
    std::string s;
    for (const auto& [fid, classes] : p.segment_classes) {
      s += std::to_string(fid) + ":";
      for (const auto& c : classes) s += to_string(c);
      s += ";";
    }
    for (const auto& b : p.boundaries) {
      s += std::to_string(static_cast<int>(b.kind)) + "," + std::to_string(b.family_id) +
           "," + std::to_string(b.multiplicity) + ";";
    }
    return s;
  };

  for (std::int64_t budget = 0; budget <= t_max && !best.found; ++budget) {
    // Choose which broken tori carry a forced boundary orbit (mask bits),
    // cheapest masks first.
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 0; mask < (1u << brokens.size()); ++mask) {
      if (std::popcount(mask) <= budget) masks.push_back(mask);
    }
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
      if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
      return a < b;
    });

    for (const auto mask : masks) {
      const std::int64_t mask_boundaries = std::popcount(mask);
      std::vector<BrokenState> bstate(brokens.size());
      std::vector<const FamilyCandidate*> chosen(fams.size(), nullptr);

      std::function<void(std::size_t, Cost)> dfs = [&](std::size_t fi, Cost acc) {
        if (acc.boundaries + mask_boundaries > budget) return;
        if (best.found && best.cost.boundaries == budget &&
            acc.mult + mask_boundaries > best.cost.mult) {
          return;
        }
        if (fi == fams.size()) {
          // All families assigned; balance already enforced incrementally.
          Cost total = acc;
          total.boundaries += mask_boundaries;
          total.mult += mask_boundaries;  // broken orbits recorded simply covered
          if (total.boundaries != budget) return;  // smaller totals found earlier

          SectionPlan plan;
          plan.search_bound = obj.bound;
          plan.complete_within_bound = true;
          for (std::size_t i = 0; i < fams.size(); ++i) {
            const auto* cand = chosen[i];
            plan.segment_classes[fams[i]->id] = cand->classes;
            for (const auto& [locus_idx, k] : cand->jumps) {
              const auto& locus = fams[i]->rational_loci[locus_idx];
              plan.boundaries.push_back(
                  BoundaryOrbit::junction(fams[i]->id, locus.s, locus.orbit, std::llabs(k)));
            }
            for (const bool hi : {false, true}) {
              const TorusEnd& end = hi ? fams[i]->end_hi : fams[i]->end_lo;
              if (end.kind == TorusEnd::Kind::BrokenFace) continue;
              const HomologyClass& adj = hi ? cand->classes.back() : cand->classes.front();
              const std::int64_t mlt = end_boundary_multiplicity(end, adj);
              if (mlt != 0) {
                plan.boundaries.push_back(BoundaryOrbit::orbit_end(fams[i]->id, hi, mlt));
              }
            }
          }
          for (std::size_t bi = 0; bi < brokens.size(); ++bi) {
            if (mask & (1u << bi)) {
              const int vertex = *std::min_element(brokens[bi].graph->vertices.begin(),
                                                   brokens[bi].graph->vertices.end());
              plan.boundaries.push_back(
                  BoundaryOrbit::broken_orbit(brokens[bi].graph->id, vertex, 1));
            }
          }
          const auto topo = plan_surface_topology(m, plan);
          plan.euler_characteristic = topo.euler_characteristic;
          plan.boundary_circles = topo.boundary_circles;
          plan.components = topo.components;
          plan.genus_integral = topo.genus_integral();
          plan.genus = topo.genus_integral() ? topo.genus2 / 2 : 0;

          const std::string lex = serialize(plan);
          bool take = false;
          if (!best.found) {
            take = true;
          } else if (total.boundaries != best.cost.boundaries) {
            take = total.boundaries < best.cost.boundaries;
          } else if (total.mult != best.cost.mult) {
            take = total.mult < best.cost.mult;
          } else if (topo.genus2 != best.genus2) {
            take = topo.genus2 < best.genus2;
          } else {
            take = lex < best.lex;
          }
          if (take) {
            best.found = true;
            best.cost = total;
            best.genus2 = topo.genus2;
            best.plan = std::move(plan);
            best.lex = lex;
          }
          return;
        }
        const TorusFamily* f = fams[fi];
        const std::int64_t cap = budget - acc.boundaries - mask_boundaries;
        for (const auto& cand : candidates_for(f, cap)) {
          if (acc.boundaries + cand.cost.boundaries + mask_boundaries > budget) continue;
          // Check the broken-face constraints this family participates in.
          std::vector<std::pair<std::size_t, std::int64_t>> updates;  // (broken idx, summed)
          bool ok = true;
          std::vector<BrokenState> saved = bstate;
          for (const bool hi : {false, true}) {
            const TorusEnd& end = hi ? f->end_hi : f->end_lo;
            if (end.kind != TorusEnd::Kind::BrokenFace) continue;
            std::size_t bi = 0;
            while (bi < brokens.size() && brokens[bi].graph->id != end.broken_id) ++bi;
            const HomologyClass& c = hi ? cand.hi_class : cand.lo_class;
            const bool vertical = brokens[bi].vertical;
            const std::int64_t fixed = vertical ? c.p : c.q;
            const std::int64_t summed = vertical ? c.q : c.p;
            if (mask & (1u << bi)) continue;  // boundary broken: unconstrained
            auto& st = bstate[bi];
            if (fixed == 0) { ok = false; break; }
            if (st.pinned && st.common != fixed) { ok = false; break; }
            st.pinned = true;
            st.common = fixed;
            bool minus = false;
            for (const auto& fr : brokens[bi].faces) {
              if (fr.family == f->id &&
                  ((hi && f->end_hi.face_id == fr.face_id) ||
                   (!hi && f->end_lo.face_id == fr.face_id))) {
                minus = fr.minus;
              }
            }
            (minus ? st.minus_sum : st.plus_sum) += summed;
            st.assigned += 1;
            if (st.assigned == static_cast<int>(brokens[bi].faces.size()) &&
                st.minus_sum != st.plus_sum) {
              ok = false;
              break;
            }
          }
          if (ok) {
            chosen[fi] = &cand;
            dfs(fi + 1, acc + cand.cost);
            chosen[fi] = nullptr;
          }
          bstate = saved;
        }
      };
      std::vector<BrokenState> init(brokens.size());
      bstate = init;
      dfs(0, Cost{});
    }
  }

  if (!best.found) return std::nullopt;
  return best.plan;
}

}  // namespace birksec
