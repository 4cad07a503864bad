#ifndef BIRKSEC_SEPARABLE_HPP
#define BIRKSEC_SEPARABLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "birksec/sections.hpp"

namespace birksec {

// 1-D Morse profile of g in H = x^2/2 + g(y): the ordered critical points.
// Minima and maxima strictly alternate along y, the outermost are minima,
// and exactly one global minimum attains the value 0.
struct CriticalPoint {
  enum class Kind { Min, Max };
  double y = 0.0;
  double value = 0.0;
  Kind kind = Kind::Min;
};

struct Profile1D {
  std::vector<CriticalPoint> critical;  // sorted by y
};

// Validates the alternation and global-minimum invariants.
Profile1D make_profile(std::vector<CriticalPoint> critical);

struct SeparableSystem {
  Profile1D g1;
  Profile1D g2;
};

// Number of connected components of {g <= s} (equivalently of the level set
// {x^2/2 + g(y) = s}): minima below s minus maxima below s.
// Throws "singular level" when s equals a critical value.
int sublevel_component_count(const Profile1D& g, double s);

// A level H = c is regular iff no sum of critical values v1 + v2 equals c.
bool is_regular_level(const SeparableSystem& sys, double c);

// The offending pair when the level is singular.
std::optional<std::pair<double, double>> singular_pair(const SeparableSystem& sys,
                                                       double c);

// Builds the invariant-torus decomposition of {H = c}: one family per
// maximal s-interval and component pair of {g1 = s} x {g2 = c - s}, broken
// tori at profile maxima crossed by s, orbit ends at minima. Families
// squeezed between a vertical and a horizontal broken torus sweep every
// positive slope and carry all primitive (P,Q) with P,Q in [1, locus_bound]
// as junction sites.
FoliatedManifold build_level_foliation(const SeparableSystem& sys, double c,
                                       std::int64_t locus_bound = 6);

struct DiskGssDecision {
  bool answer = false;
  std::optional<double> witness_c0;
  std::string violated_clause;  // set when answer is false
};

// Disk-like global surface of section criterion: both sublevel sets are
// disks and the top critical values leave a gap A + B < c.
DiskGssDecision disk_gss_decision(const SeparableSystem& sys, double c);

// Synthesizes a section plan on the level foliation; never fails on a
// regular level (classes against the first-quadrant cone always exist and
// the balance equations are always solvable).
SectionPlan always_has_section(const SeparableSystem& sys, double c,
                               std::int64_t bound = 12);

}  // namespace birksec

#endif
