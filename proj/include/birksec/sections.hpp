#ifndef BIRKSEC_SECTIONS_HPP
#define BIRKSEC_SECTIONS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "birksec/foliation.hpp"

namespace birksec {

// One boundary orbit of a section plan.
struct BoundaryOrbit {
  enum class Kind { OrbitEnd, RationalJunction, BrokenOrbit };
  Kind kind = Kind::OrbitEnd;
  int family_id = -1;        // OrbitEnd, RationalJunction
  bool at_hi_end = false;    // OrbitEnd: which end of the family
  double s = 0.0;            // RationalJunction: junction parameter
  PrimitiveOrbitClass orbit; // RationalJunction: orbit class on the torus
  int broken_id = -1;        // BrokenOrbit
  int vertex_id = -1;        // BrokenOrbit
  std::int64_t multiplicity = 1;

  static BoundaryOrbit orbit_end(int family, bool hi, std::int64_t mult) {
    BoundaryOrbit b;
    b.kind = Kind::OrbitEnd;
    b.family_id = family;
    b.at_hi_end = hi;
    b.multiplicity = mult;
    return b;
  }
  static BoundaryOrbit junction(int family, double s, PrimitiveOrbitClass orbit,
                                std::int64_t mult) {
    BoundaryOrbit b;
    b.kind = Kind::RationalJunction;
    b.family_id = family;
    b.s = s;
    b.orbit = orbit;
    b.multiplicity = mult;
    return b;
  }
  static BoundaryOrbit broken_orbit(int broken, int vertex, std::int64_t mult) {
    BoundaryOrbit b;
    b.kind = Kind::BrokenOrbit;
    b.broken_id = broken;
    b.vertex_id = vertex;
    b.multiplicity = mult;
    return b;
  }
};

// A full section plan: one homology class per maximal transverse segment
// (families split exactly at the recorded junction boundaries, in s order)
// plus the boundary-orbit records and derived surface data.
struct SectionPlan {
  std::map<int, std::vector<HomologyClass>> segment_classes;
  std::vector<BoundaryOrbit> boundaries;

  int euler_characteristic = 0;
  std::int64_t genus = 0;
  bool genus_integral = true;
  int boundary_circles = 0;
  int components = 0;

  std::int64_t search_bound = 0;
  bool complete_within_bound = false;

  std::int64_t total_boundary_multiplicity() const {
    std::int64_t t = 0;
    for (const auto& b : boundaries) t += b.multiplicity;
    return t;
  }
};

struct SynthesisObjective {
  std::int64_t bound = 12;  // max |p|,|q| of any candidate class
};

struct PlanCheck {
  bool valid = false;
  std::vector<Diagnostic> diagnostics;
};

// Checks a plan clause by clause against the manifold: admissible cones per
// segment, orbit-end multiplicities, junction arithmetic, passed rational
// loci, and broken-torus balance versus recorded broken-orbit boundaries.
// Throws if the manifold itself is invalid or references dangle.
PlanCheck plan_is_valid(const FoliatedManifold& m, const SectionPlan& plan);

// Combinatorial surface data of a valid plan, built from gcd sheets, caps at
// closed orbit ends, junction gluings and broken-torus crossings.
struct SurfaceTopology {
  int euler_characteristic = 0;
  int boundary_circles = 0;
  int components = 0;
  std::int64_t genus2 = 0;  // 2 * genus; genus integral iff even
  bool genus_integral() const { return genus2 % 2 == 0; }
};

SurfaceTopology plan_surface_topology(const FoliatedManifold& m,
                                      const SectionPlan& plan);

// Throws std::invalid_argument when the plan is not valid.
int euler_characteristic_of_plan(const FoliatedManifold& m, const SectionPlan& plan);

// genus = (2*components - boundary_circles - chi) / 2; throws on parity
// violation, which signals an inconsistent plan.
std::int64_t genus_of_plan(const FoliatedManifold& m, const SectionPlan& plan);

// Numeric transversality re-check: minimum normalized determinant margin per
// segment, plus the degeneration report at each junction.
struct SegmentMargin {
  int family = -1;
  int segment_index = 0;
  double min_margin = 0.0;
  double argmin_s = 0.0;
};

struct JunctionDegeneration {
  int family = -1;
  double s = 0.0;
  double margin_at_junction = 0.0;  // |det| normalized; ~0 at the junction
  bool sign_consistent = false;
};

struct NumericReport {
  bool pass = false;
  double tolerance = 0.0;
  std::vector<SegmentMargin> segments;
  std::vector<JunctionDegeneration> junctions;
  double min_margin = 0.0;
};

NumericReport verify_plan_numeric(const FoliatedManifold& m, const SectionPlan& plan,
                                  int samples_per_segment = 100,
                                  double tol = kParallelTol);

// Complete search (within the class bound) for a valid plan minimizing
// (#boundary orbits, total multiplicity, genus), deterministic tie-break.
// Returns std::nullopt when no plan with classes bounded by obj.bound exists.
std::optional<SectionPlan> synthesize_section(const FoliatedManifold& m,
                                              const SynthesisObjective& obj = {});

}  // namespace birksec

#endif
