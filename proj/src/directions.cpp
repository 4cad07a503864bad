#include "birksec/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace birksec {

namespace {

constexpr double kPi = std::numbers::pi;

void require_samples(const DirectionSet& d) {
  if (d.symbolic()) {
    throw std::invalid_argument("operation requires a sampled direction set");
  }
  if (d.samples.empty()) {
    throw std::invalid_argument("empty direction sample list");
  }
}

void check_nonzero(const FlowDirection& v) {
  if (std::hypot(v.a, v.b) == 0.0) {
    throw std::invalid_argument("zero vector in direction sample list");
  }
}

// Wrap an angle difference into (-pi/2, pi/2]: the shorter projective arc.
double wrap_half(double d) {
  while (d > kPi / 2) d -= kPi;
  while (d <= -kPi / 2) d += kPi;
  return d;
}

}  // namespace

bool ClassCone::contains(const HomologyClass& c, double tol) const {
  if (empty || c.is_zero()) return false;
  const double cn = std::hypot(static_cast<double>(c.p), static_cast<double>(c.q));
  const double s1 = c.p * lo.nx + c.q * lo.ny;
  const double s2 = c.p * hi.nx + c.q * hi.ny;
  const bool ok1 = lo.strict ? s1 > tol * cn : s1 >= -tol * cn;
  const bool ok2 = hi.strict ? s2 > tol * cn : s2 >= -tol * cn;
  return ok1 && ok2;
}

namespace {

ClassCone cone_from_normal_angles(const std::vector<double>& angles) {
  ClassCone cone;
  if (angles.empty()) {
    cone.empty = true;
    return cone;
  }
  std::vector<double> a = angles;
  std::sort(a.begin(), a.end());
  // Minimal circular arc covering all normals: complement of the largest gap.
  double max_gap = 2 * kPi - (a.back() - a.front());
  double arc_lo = a.front();
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double gap = a[i + 1] - a[i];
    if (gap > max_gap) {
      max_gap = gap;
      arc_lo = a[i + 1];
    }
  }
  const double width = 2 * kPi - max_gap;
  if (width >= kPi - 1e-12) {
    cone.empty = true;
    return cone;
  }
  const double arc_hi = arc_lo + width;
  cone.empty = false;
  cone.lo = {std::cos(arc_lo), std::sin(arc_lo), true};
  cone.hi = {std::cos(arc_hi), std::sin(arc_hi), true};
  return cone;
}

ClassCone cone_from_sample_range(const DirectionSet& d, double s_lo, double s_hi) {
  std::vector<double> angles;
  angles.reserve(d.samples.size());
  for (const auto& smp : d.samples) {
    if (smp.s <= s_lo || smp.s >= s_hi) continue;
    check_nonzero(smp.dir);
    // det[c; v] = c . (b, -a): the constraint normal is v rotated by -90 deg.
    angles.push_back(std::atan2(-smp.dir.a, smp.dir.b));
  }
  return cone_from_normal_angles(angles);
}

}  // namespace

ClassCone admissible_cone(const DirectionSet& d) {
  if (d.symbolic()) {
    // Limits of det[c; v] > 0 over the open quadrant give the closed cone
    // {p >= 0, q <= 0} \ {0}.
    ClassCone cone;
    cone.empty = false;
    cone.lo = {0.0, -1.0, false};
    cone.hi = {1.0, 0.0, false};
    return cone;
  }
  require_samples(d);
  const double inf = std::numeric_limits<double>::infinity();
  return cone_from_sample_range(d, -inf, inf);
}

ClassCone admissible_cone(const DirectionSet& d, double s_lo, double s_hi) {
  if (d.symbolic()) return admissible_cone(d);
  require_samples(d);
  return cone_from_sample_range(d, s_lo, s_hi);
}

std::vector<HomologyClass> integer_points_in_cone(const ClassCone& cone,
                                                  std::int64_t bound) {
  if (bound < 1) throw std::invalid_argument("bound must be >= 1");
  std::vector<HomologyClass> out;
  if (cone.empty) return out;
  for (std::int64_t p = -bound; p <= bound; ++p) {
    for (std::int64_t q = -bound; q <= bound; ++q) {
      const HomologyClass c{p, q};
      if (!c.is_zero() && cone.contains(c)) out.push_back(c);
    }
  }
  return out;
}

std::vector<double> projective_angle_lift(const DirectionSet& d) {
  require_samples(d);
  std::vector<double> lift;
  lift.reserve(d.samples.size());
  double prev_theta = 0.0;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    check_nonzero(d.samples[i].dir);
    double theta = std::atan2(d.samples[i].dir.b, d.samples[i].dir.a);
    if (theta < 0) theta += kPi;        // projective representative in [0, pi)
    if (theta >= kPi) theta -= kPi;
    if (i == 0) {
      lift.push_back(theta);
    } else {
      lift.push_back(lift.back() + wrap_half(theta - prev_theta));
    }
    prev_theta = theta;
  }
  return lift;
}

bool covers_all_directions(const DirectionSet& d) {
  const auto lift = projective_angle_lift(d);
  const auto [mn, mx] = std::minmax_element(lift.begin(), lift.end());
  return *mx - *mn >= kPi - kParallelTol;
}

std::vector<std::pair<double, double>> coverage_windows(const DirectionSet& d) {
  const auto lift = projective_angle_lift(d);
  const auto& samples = d.samples;
  std::vector<std::pair<double, double>> windows;
  if (lift.size() < 2) return windows;

  const double span = kPi - kParallelTol;
  double win_start = samples.front().s;
  double lo = lift.front(), hi = lift.front();
  for (std::size_t i = 0; i + 1 < lift.size(); ++i) {
    double seg_a = lift[i], seg_b = lift[i + 1];
    double s_a = samples[i].s, s_b = samples[i + 1].s;
    // A segment is monotone; it may complete several windows only if the
    // restart leaves enough range, which a single segment cannot, so at most
    // one completion per direction pass.
    while (true) {
      const double new_lo = std::min(lo, std::min(seg_a, seg_b));
      const double new_hi = std::max(hi, std::max(seg_a, seg_b));
      if (new_hi - new_lo < span) {
        lo = new_lo;
        hi = new_hi;
        break;
      }
      // Completion happens inside this segment: find the crossing parameter.
      double target;
      if (seg_b > seg_a) {
        target = lo + span;  // ascending through lo + span
      } else {
        target = hi - span;  // descending through hi - span
      }
      double t = (seg_b == seg_a) ? 1.0 : (target - seg_a) / (seg_b - seg_a);
      t = std::clamp(t, 0.0, 1.0);
      const double s_star = s_a + t * (s_b - s_a);
      windows.emplace_back(win_start, s_star);
      // Restart the window at the completion point.
      win_start = s_star;
      seg_a = target;
      s_a = s_star;
      lo = hi = target;
    }
  }
  return windows;
}

int count_disjoint_coverage_windows(const DirectionSet& d) {
  return static_cast<int>(coverage_windows(d).size());
}

FlowDirection direction_at(const DirectionSet& d, double s) {
  if (d.symbolic()) {
    throw std::logic_error("direction_at is undefined for the symbolic quadrant");
  }
  require_samples(d);
  const auto& smp = d.samples;
  if (s <= smp.front().s) return smp.front().dir;
  if (s >= smp.back().s) return smp.back().dir;
  std::size_t i = 0;
  while (i + 1 < smp.size() && smp[i + 1].s < s) ++i;
  const auto& a = smp[i];
  const auto& b = smp[i + 1];
  const double t = (s - a.s) / (b.s - a.s);
  const double phi_a = std::atan2(a.dir.b, a.dir.a);
  double dphi = std::atan2(b.dir.b, b.dir.a) - phi_a;
  while (dphi > kPi) dphi -= 2 * kPi;
  while (dphi <= -kPi) dphi += 2 * kPi;
  const double phi = phi_a + t * dphi;
  return {std::cos(phi), std::sin(phi)};
}

}  // namespace birksec
