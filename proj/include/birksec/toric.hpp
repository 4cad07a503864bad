#ifndef BIRKSEC_TORIC_HPP
#define BIRKSEC_TORIC_HPP

#include <array>
#include <optional>
#include <vector>

#include "birksec/sections.hpp"

namespace birksec {

// Sampled boundary curve of a toric domain in the moment plane: a polyline
// from (0,a) on the vertical axis to (b,0) on the horizontal axis, with the
// outward normal of each segment. The flow direction on the torus over a
// boundary point is parallel to the outward normal there.
struct ToricBoundaryCurve {
  std::vector<std::array<double, 2>> points;
  std::vector<FlowDirection> normals;  // unit outward normal per segment
  std::vector<double> vertex_s;        // arclength-normalized vertex parameters
  std::vector<double> segment_s;       // parameter of each segment midpoint

  std::size_t segment_count() const { return normals.size(); }
  DirectionSet normal_directions() const;
};

// Validates the endpoint and sign conventions and computes outward normals.
ToricBoundaryCurve load_curve(const std::vector<std::array<double, 2>>& points);

struct DomainClass {
  bool monotone = false;
  bool strictly_monotone = false;
  bool convex = false;
  bool concave = false;
  bool star_shaped = false;
};

DomainClass classify_domain(const ToricBoundaryCurve& c);

// True iff no interior normal is projectively parallel to (0,1) (end 0,
// the orbit over f(0)) resp. (1,0) (end 1), so the core orbit bounds a
// disk-like section.
bool disk_section_at_end(const ToricBoundaryCurve& c, int end);

// A class with both entries nonzero that avoids every sampled normal
// projectively, oriented positively transverse; classes are searched up to
// the bound, or only |p| = |q| = 1 when gss is set.
std::optional<HomologyClass> annulus_section(const ToricBoundaryCurve& c, bool gss,
                                             std::int64_t bound = 12);

// Section bounded by the k-fold covered (P,Q)-orbit over f(s0): classes
// (kP,0) before and (0,-kQ) after the junction, with the sign conventions
// resolved by positive transversality. Throws when the normal at s0 is not
// parallel to the orbit; returns std::nullopt when the axis-avoidance
// conditions fail.
std::optional<SectionPlan> interior_orbit_section(const ToricBoundaryCurve& c,
                                                  double s0, PrimitiveOrbitClass orbit,
                                                  std::int64_t k);

int boundary_orbit_lower_bound(const ToricBoundaryCurve& c);

// Star-shaped curve with k semicircular bulges whose normals each sweep all
// of RP^1, forcing at least k boundary orbits.
ToricBoundaryCurve make_k_semicircle_curve(int k);

struct TriangleCapacity {
  double r = 0.0;        // inscribed-triangle size; equals c_B and c_Z
  double touch_s = 0.0;  // parameter of the touching point
  std::size_t touch_index = 0;
};

// Requires a monotone curve.
TriangleCapacity inscribed_triangle_capacity(const ToricBoundaryCurve& c);

// The single-family foliated manifold carried by the curve, with rational
// loci at every parameter where the normal passes a primitive direction of
// height <= locus_bound. extra_loci are merged in (deduplicating nearby
// detected loci), so externally chosen junction sites validate.
FoliatedManifold toric_foliation(const ToricBoundaryCurve& c,
                                 std::int64_t locus_bound = 12,
                                 const std::vector<RationalLocus>& extra_loci = {});

}  // namespace birksec

#endif
