#ifndef BIRKSEC_DIRECTIONS_HPP
#define BIRKSEC_DIRECTIONS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "birksec/homology.hpp"

namespace birksec {

// The flow directions met along a family of invariant tori. Either an
// ordered list of samples (parameter values strictly increasing) or the
// symbolic open first quadrant used for separable Hamiltonians.
struct DirectionSample {
  double s = 0.0;
  FlowDirection dir;
};

struct DirectionSet {
  enum class Kind { Samples, FirstQuadrant };
  Kind kind = Kind::Samples;
  std::vector<DirectionSample> samples;  // nonempty when kind == Samples

  static DirectionSet first_quadrant() {
    DirectionSet d;
    d.kind = Kind::FirstQuadrant;
    return d;
  }
  static DirectionSet from_samples(std::vector<DirectionSample> s) {
    DirectionSet d;
    d.kind = Kind::Samples;
    d.samples = std::move(s);
    return d;
  }
  bool symbolic() const { return kind == Kind::FirstQuadrant; }
};

// The set { c != 0 : det[c; v] > 0 for every direction v of a family }.
// Always an intersection of half-planes through the origin, stored by its
// two extreme constraints. Constraints may be closed when they arise as
// limits of an open set of directions (the symbolic first quadrant).
struct ClassCone {
  struct HalfPlane {
    double nx = 0.0, ny = 0.0;  // unit normal; membership is c.n > 0 (or >= 0)
    bool strict = true;
  };
  bool empty = true;
  HalfPlane lo, hi;  // identical when the cone is a single half-plane

  bool contains(const HomologyClass& c, double tol = kParallelTol) const;
};

// The cone of classes positively transverse to every direction of d.
// Consecutive samples are assumed to interpolate along the shorter
// projective arc, so membership is decided by the samples alone.
ClassCone admissible_cone(const DirectionSet& d);

// Same, restricted to the samples with parameter strictly inside (s_lo, s_hi).
// For the symbolic quadrant the restriction is the whole cone.
ClassCone admissible_cone(const DirectionSet& d, double s_lo, double s_hi);

// All integer classes with max(|p|,|q|) <= bound inside the cone,
// sorted lexicographically by (p, q).
std::vector<HomologyClass> integer_points_in_cone(const ClassCone& cone,
                                                  std::int64_t bound);

// True iff the projective images of the sampled directions (with shorter-arc
// interpolation between consecutive samples) cover all of RP^1.
// Throws if a sample direction vanishes.
bool covers_all_directions(const DirectionSet& d);

// Maximum number of pairwise-disjoint parameter windows whose projective
// direction arcs each cover RP^1, computed by a greedy left-to-right sweep.
// A lower bound on boundary orbits of any Birkhoff section meeting the family.
int count_disjoint_coverage_windows(const DirectionSet& d);

// Window intervals found by the greedy sweep, for reporting and figures.
std::vector<std::pair<double, double>> coverage_windows(const DirectionSet& d);

// Continuous lift of the projective angle along the samples; exposed for the
// toric frontend (rational-locus detection shares the sweep).
std::vector<double> projective_angle_lift(const DirectionSet& d);

// Direction at parameter s by shorter-arc interpolation of the bracketing
// samples. s outside the sampled range clamps to the nearest sample.
FlowDirection direction_at(const DirectionSet& d, double s);

}  // namespace birksec

#endif
