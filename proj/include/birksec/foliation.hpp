#ifndef BIRKSEC_FOLIATION_HPP
#define BIRKSEC_FOLIATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "birksec/directions.hpp"
#include "birksec/homology.hpp"

namespace birksec {

// Where a family of tori terminates: collapsing onto a periodic orbit
// (vertical or horizontal invariant line) or accumulating on one face of a
// broken torus.
struct TorusEnd {
  enum class Kind { VerticalOrbit, HorizontalOrbit, BrokenFace };
  Kind kind = Kind::VerticalOrbit;
  int broken_id = -1;  // BrokenFace only
  int face_id = -1;    // BrokenFace only

  static TorusEnd vertical() { return {Kind::VerticalOrbit, -1, -1}; }
  static TorusEnd horizontal() { return {Kind::HorizontalOrbit, -1, -1}; }
  static TorusEnd broken_face(int b, int f) { return {Kind::BrokenFace, b, f}; }
};

// A rational torus inside a family, available as a junction where a section
// may change class by a multiple of the orbit class.
struct RationalLocus {
  double s = 0.0;
  PrimitiveOrbitClass orbit;
};

struct TorusFamily {
  int id = 0;
  double s_lo = 0.0;
  double s_hi = 1.0;
  DirectionSet directions;
  TorusEnd end_lo;
  TorusEnd end_hi;
  std::vector<RationalLocus> rational_loci;  // sorted by s, strictly interior
};

// Face-edge incidence of a broken torus. Vertices are the isolated periodic
// orbits, directed edges the open annuli, faces the adjacent torus families
// split into the two side classes.
struct BrokenEdge {
  int id = 0;
  int from = 0;
  int to = 0;
};

struct EdgeUse {
  int edge = 0;
  int mult = 1;
};

struct BrokenFaceRec {
  enum class Side { Minus, Plus };
  int id = 0;
  Side side = Side::Minus;
  int family = -1;  // the adjacent TorusFamily
  std::vector<EdgeUse> edges;
};

struct BrokenTorusGraph {
  enum class Orientation { Vertical, Horizontal };
  int id = 0;
  Orientation orientation = Orientation::Vertical;
  std::vector<int> vertices;
  std::vector<BrokenEdge> edges;
  std::vector<BrokenFaceRec> faces;
};

struct FoliatedManifold {
  std::vector<TorusFamily> families;
  std::vector<BrokenTorusGraph> broken;

  const TorusFamily* family(int id) const;
  const BrokenTorusGraph* broken_torus(int id) const;
};

struct Diagnostic {
  std::string location;
  std::string message;
};

// Empty iff every structural invariant holds. With allow_multiplicity the
// strict one-use-per-side rule for edges is relaxed to at-least-once.
std::vector<Diagnostic> validate_manifold(const FoliatedManifold& m,
                                          bool allow_multiplicity = false);

// Balance equations for a transverse crossing of a broken torus.
// Vertical orientation: all face classes share a common p != 0 and the
// minus-side q's sum to the plus-side q's. Horizontal: transposed.
// Throws if a face class is missing.
bool broken_balance_check(const BrokenTorusGraph& b,
                          const std::map<int, HomologyClass>& face_classes);

// Distributes integer face values over edges so that each face's value is
// the sum over its boundary edges (with multiplicity). Returns std::nullopt
// when the system is infeasible over the integers. Among valid assignments,
// prefers small maximum absolute value, then lexicographic by edge id.
std::optional<std::map<int, std::int64_t>> broken_edge_assignment(
    const BrokenTorusGraph& b, const std::map<int, std::int64_t>& face_values);

// Covering multiplicity of the boundary at an orbit end: |q| for a vertical
// line, |p| for a horizontal line; zero means the section closes up there.
// Throws for broken-face ends.
std::int64_t end_boundary_multiplicity(const TorusEnd& end, const HomologyClass& c);

// Outcome of a section crossing a rational torus with the given classes on
// the two sides.
struct JunctionTransition {
  enum class Kind { NoBoundary, Boundary, Invalid };
  Kind kind = Kind::Invalid;
  std::int64_t k = 0;  // Boundary only: c_plus - c_minus = k * orbit, k != 0
  std::string reason;
};

JunctionTransition junction_multiplicity(const PrimitiveOrbitClass& orbit,
                                         const HomologyClass& c_minus,
                                         const HomologyClass& c_plus);

}  // namespace birksec

#endif
