#include "birksec/toric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace birksec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGeomTol = 1e-12;

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Even-odd point-in-polygon test against the region closed up along the axes.
bool inside_domain(const std::vector<std::array<double, 2>>& curve, double x, double y) {
  std::vector<std::array<double, 2>> poly;
  poly.push_back({0.0, 0.0});
  poly.insert(poly.end(), curve.begin(), curve.end());
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a[1] > y) != (b[1] > y)) {
      const double xc = (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0];
      if (x < xc) in = !in;
    }
  }
  return in;
}

}  // namespace

DirectionSet ToricBoundaryCurve::normal_directions() const {
  std::vector<DirectionSample> samples;
  samples.reserve(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    samples.push_back({segment_s[i], normals[i]});
  }
  return DirectionSet::from_samples(samples);
}

ToricBoundaryCurve load_curve(const std::vector<std::array<double, 2>>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument("curve needs at least 3 points");
  }
  const auto& first = points.front();
  const auto& last = points.back();
  if (first[0] != 0.0 || !(first[1] > 0.0)) {
    throw std::invalid_argument("curve must start at (0,a) with a > 0");
  }
  if (last[1] != 0.0 || !(last[0] > 0.0)) {
    throw std::invalid_argument("curve must end at (b,0) with b > 0");
  }
  double scale = 0.0;
  for (const auto& p : points) {
    if (p[0] < 0.0 || p[1] < 0.0) {
      throw std::invalid_argument("curve sample with negative coordinate");
    }
    if (p[0] == 0.0 && p[1] == 0.0) {
      throw std::invalid_argument("curve sample at the origin");
    }
    scale = std::max({scale, p[0], p[1]});
  }

  ToricBoundaryCurve c;
  c.points = points;
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dx = points[i + 1][0] - points[i][0];
    const double dy = points[i + 1][1] - points[i][1];
    const double len = std::hypot(dx, dy);
    if (len <= kGeomTol * scale) {
      throw std::invalid_argument("duplicate consecutive curve points");
    }
    cumulative.push_back(cumulative.back() + len);
  }
  const double total = cumulative.back();
  for (double l : cumulative) c.vertex_s.push_back(l / total);

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double tx = points[i + 1][0] - points[i][0];
    const double ty = points[i + 1][1] - points[i][1];
    const double len = std::hypot(tx, ty);
    double nx = ty / len, ny = -tx / len;  // forward tangent rotated by -90
    const double mx = (points[i][0] + points[i + 1][0]) / 2;
    const double my = (points[i][1] + points[i + 1][1]) / 2;
    const double eps = 1e-7 * scale;
    if (inside_domain(points, mx + eps * nx, my + eps * ny)) {
      nx = -nx;
      ny = -ny;
    }
    c.normals.push_back({nx, ny});
    c.segment_s.push_back((c.vertex_s[i] + c.vertex_s[i + 1]) / 2);
  }
  return c;
}

DomainClass classify_domain(const ToricBoundaryCurve& c) {
  DomainClass d;
  d.monotone = true;
  d.strictly_monotone = true;
  for (const auto& n : c.normals) {
    if (n.a < -kParallelTol || n.b < -kParallelTol) d.monotone = false;
    if (!(n.a > kParallelTol) || !(n.b > kParallelTol)) d.strictly_monotone = false;
  }

  // Convexity of the domain closed along the axes: the clockwise traversal
  // (0,0) -> (0,a) -> curve -> (b,0) -> (0,0) never turns left.
  std::vector<std::array<double, 2>> poly;
  poly.push_back({0.0, 0.0});
  poly.insert(poly.end(), c.points.begin(), c.points.end());
  d.convex = true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const auto& e = poly[(i + 2) % n];
    const double c1x = b[0] - a[0], c1y = b[1] - a[1];
    const double c2x = e[0] - b[0], c2y = e[1] - b[1];
    const double cr = cross2(c1x, c1y, c2x, c2y);
    if (cr > kParallelTol * std::hypot(c1x, c1y) * std::hypot(c2x, c2y)) {
      d.convex = false;
      break;
    }
  }

  // Concavity (complement convex): monotone with the curve turning the other
  // way at every interior corner.
  d.concave = d.monotone;
  for (std::size_t i = 0; i + 2 < c.points.size() && d.concave; ++i) {
    const double c1x = c.points[i + 1][0] - c.points[i][0];
    const double c1y = c.points[i + 1][1] - c.points[i][1];
    const double c2x = c.points[i + 2][0] - c.points[i + 1][0];
    const double c2y = c.points[i + 2][1] - c.points[i + 1][1];
    if (cross2(c1x, c1y, c2x, c2y) <
        -kParallelTol * std::hypot(c1x, c1y) * std::hypot(c2x, c2y)) {
      d.concave = false;
    }
  }

  d.star_shaped = true;
  for (std::size_t i = 0; i < c.segment_count(); ++i) {
    const double mx = (c.points[i][0] + c.points[i + 1][0]) / 2;
    const double my = (c.points[i][1] + c.points[i + 1][1]) / 2;
    const double dot = mx * c.normals[i].a + my * c.normals[i].b;
    if (!(dot > kParallelTol * std::hypot(mx, my))) d.star_shaped = false;
  }
  return d;
}

namespace {

// Does the projective normal direction meet d somewhere along the (shorter
// arc interpolated) subrange of segments [i0, i1]?
bool normals_hit_direction(const ToricBoundaryCurve& c, std::size_t i0, std::size_t i1,
                           double dx, double dy) {
  const double dn = std::hypot(dx, dy);
  double prev_cross = 0.0;
  bool have_prev = false;
  double px = 0.0, py = 0.0;
  for (std::size_t i = i0; i <= i1 && i < c.segment_count(); ++i) {
    double nx = c.normals[i].a, ny = c.normals[i].b;
    if (have_prev && nx * px + ny * py < 0) {
      nx = -nx;  // projective representative continuous along the walk
      ny = -ny;
    }
    const double cr = cross2(nx, ny, dx, dy) / dn;
    if (std::abs(cr) <= kParallelTol) return true;
    if (have_prev && ((cr > 0) != (prev_cross > 0))) return true;
    prev_cross = cr;
    px = nx;
    py = ny;
    have_prev = true;
  }
  return false;
}

std::size_t segment_of(const ToricBoundaryCurve& c, double s) {
  std::size_t i = 0;
  while (i + 2 < c.vertex_s.size() && c.vertex_s[i + 1] < s) ++i;
  return i;
}

}  // namespace

bool disk_section_at_end(const ToricBoundaryCurve& c, int end) {
  if (end != 0 && end != 1) throw std::invalid_argument("end must be 0 or 1");
  const double dx = end == 0 ? 0.0 : 1.0;
  const double dy = end == 0 ? 1.0 : 0.0;
  return !normals_hit_direction(c, 0, c.segment_count() - 1, dx, dy);
}

std::optional<HomologyClass> annulus_section(const ToricBoundaryCurve& c, bool gss,
                                             std::int64_t bound) {
  const std::int64_t limit = gss ? 1 : bound;
  for (std::int64_t mx = 1; mx <= limit; ++mx) {
    for (std::int64_t p = 1; p <= mx; ++p) {
      for (std::int64_t aq = 1; aq <= mx; ++aq) {
        if (std::max(p, aq) != mx) continue;
        for (const std::int64_t q : {-aq, aq}) {
          if (normals_hit_direction(c, 0, c.segment_count() - 1,
                                    static_cast<double>(p), static_cast<double>(q))) {
            continue;
          }
          // Orient positively: the sign of det[c; n] is constant along the curve.
          HomologyClass cls{p, q};
          if (!is_positively_transverse(cls, c.normals.front())) cls = -cls;
          return cls;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<SectionPlan> interior_orbit_section(const ToricBoundaryCurve& c,
                                                  double s0, PrimitiveOrbitClass orbit,
                                                  std::int64_t k) {
  if (k < 1) throw std::invalid_argument("covering multiplicity k must be >= 1");
  if (!(s0 > 0.0 && s0 < 1.0)) throw std::invalid_argument("s0 must be interior");
  const DirectionSet dirs = c.normal_directions();
  const FlowDirection at = direction_at(dirs, s0);
  if (admits_transverse_curve(orbit.as_class(), at, 1e-6)) {
    throw std::invalid_argument("normal at s0 is not parallel to the orbit class");
  }
  // Orient the orbit along the outward normal.
  PrimitiveOrbitClass o = orbit;
  if (o.P * at.a + o.Q * at.b < 0) o = {-o.P, -o.Q};

  // Axis avoidance before and after the junction.
  const std::size_t js = segment_of(c, s0);
  if (normals_hit_direction(c, 0, js, 1.0, 0.0)) return std::nullopt;
  if (normals_hit_direction(c, js, c.segment_count() - 1, 0.0, 1.0)) return std::nullopt;

  const double sy = c.normals[0].b > 0 ? 1.0 : -1.0;
  const double sx = c.normals.back().a > 0 ? 1.0 : -1.0;
  const HomologyClass before{k * std::llabs(o.P) * static_cast<std::int64_t>(sy), 0};
  const HomologyClass after{0, -k * std::llabs(o.Q) * static_cast<std::int64_t>(sx)};

  SectionPlan plan;
  plan.segment_classes[0] = {before, after};
  plan.boundaries.push_back(BoundaryOrbit::junction(0, s0, o, k));
  const std::int64_t lo_mult = end_boundary_multiplicity(TorusEnd::vertical(), before);
  const std::int64_t hi_mult = end_boundary_multiplicity(TorusEnd::horizontal(), after);
  if (lo_mult != 0) plan.boundaries.push_back(BoundaryOrbit::orbit_end(0, false, lo_mult));
  if (hi_mult != 0) plan.boundaries.push_back(BoundaryOrbit::orbit_end(0, true, hi_mult));

  const FoliatedManifold m = toric_foliation(c, 12, {{s0, o}});
  const auto topo = plan_surface_topology(m, plan);
  plan.euler_characteristic = topo.euler_characteristic;
  plan.boundary_circles = topo.boundary_circles;
  plan.components = topo.components;
  plan.genus_integral = topo.genus_integral();
  plan.genus = topo.genus_integral() ? topo.genus2 / 2 : 0;
  return plan;
}

int boundary_orbit_lower_bound(const ToricBoundaryCurve& c) {
  return count_disjoint_coverage_windows(c.normal_directions());
}

ToricBoundaryCurve make_k_semicircle_curve(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double step = kPi / 360.0;  // half-degree sampling
  const double gamma = kPi / 2 / (4 * k);
  std::vector<std::array<double, 2>> pts;
  pts.push_back({0.0, 1.0});

  double phi = kPi / 2;  // walk the base circle from (0,1) toward (1,0)
  for (int j = 0; j < k; ++j) {
    const double center = kPi / 2 * (k - j - 0.5) / k;
    const double bulge_hi = center + gamma;
    const double bulge_lo = center - gamma;
    for (double a = phi - step; a > bulge_hi; a -= step) {
      pts.push_back({std::cos(a), std::sin(a)});
    }
    pts.push_back({std::cos(bulge_hi), std::sin(bulge_hi)});
    // Outward semicircular bulge over the chord between the two base points.
    const double cx = std::cos(gamma) * std::cos(center);
    const double cy = std::cos(gamma) * std::sin(center);
    const double rho = std::sin(gamma);
    for (double psi = kPi / 2 - step; psi > -kPi / 2; psi -= step) {
      pts.push_back({cx + rho * std::cos(center + psi), cy + rho * std::sin(center + psi)});
    }
    pts.push_back({std::cos(bulge_lo), std::sin(bulge_lo)});
    phi = bulge_lo;
  }
  for (double a = phi - step; a > step / 2; a -= step) {
    pts.push_back({std::cos(a), std::sin(a)});
  }
  pts.push_back({1.0, 0.0});
  return load_curve(pts);
}

TriangleCapacity inscribed_triangle_capacity(const ToricBoundaryCurve& c) {
  if (!classify_domain(c).monotone) {
    throw std::invalid_argument("inscribed-triangle capacity requires a monotone curve");
  }
  TriangleCapacity out;
  out.r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const double v = c.points[i][0] + c.points[i][1];
    if (v < out.r) {
      out.r = v;
      out.touch_s = c.vertex_s[i];
      out.touch_index = i;
    }
  }
  return out;
}

FoliatedManifold toric_foliation(const ToricBoundaryCurve& c, std::int64_t locus_bound,
                                 const std::vector<RationalLocus>& extra_loci) {
  TorusFamily f;
  f.id = 0;
  f.s_lo = 0.0;
  f.s_hi = 1.0;
  f.directions = c.normal_directions();
  f.end_lo = TorusEnd::vertical();
  f.end_hi = TorusEnd::horizontal();

  const auto lift = projective_angle_lift(f.directions);
  const auto& samples = f.directions.samples;

  std::vector<RationalLocus> loci;
  for (std::int64_t P = 0; P <= locus_bound; ++P) {
    for (std::int64_t Q = -locus_bound; Q <= locus_bound; ++Q) {
      if (P == 0 && Q <= 0) continue;  // projective representatives
      if (std::gcd(P, std::llabs(Q)) != 1) continue;
      const double omega0 = std::atan2(static_cast<double>(Q), static_cast<double>(P));
      // Hits of the projective lift against omega0 mod pi.
      std::vector<double> hits;
      for (std::size_t i = 0; i + 1 < lift.size(); ++i) {
        const double lo = std::min(lift[i], lift[i + 1]);
        const double hi = std::max(lift[i], lift[i + 1]);
        const long m_lo = static_cast<long>(std::ceil((lo - omega0) / kPi - 1e-12));
        const long m_hi = static_cast<long>(std::floor((hi - omega0) / kPi + 1e-12));
        for (long mm = m_lo; mm <= m_hi; ++mm) {
          const double target = omega0 + mm * kPi;
          double s;
          if (std::abs(lift[i + 1] - lift[i]) < 1e-13) {
            s = (samples[i].s + samples[i + 1].s) / 2;
          } else {
            const double t = (target - lift[i]) / (lift[i + 1] - lift[i]);
            if (t < -1e-9 || t > 1 + 1e-9) continue;
            s = samples[i].s + t * (samples[i + 1].s - samples[i].s);
          }
          hits.push_back(s);
        }
      }
      if (hits.empty()) continue;
      std::sort(hits.begin(), hits.end());
      // Merge runs of hits connected by stretches where the direction stays
      // parallel (flat edges, constant-direction families).
      std::vector<std::pair<double, double>> groups;
      for (double h : hits) {
        if (!groups.empty()) {
          const double gap_lo = groups.back().second;
          bool parallel_between = true;
          for (std::size_t i = 0; i < samples.size(); ++i) {
            const double mid = samples[i].s;
            if (mid <= gap_lo || mid >= h) continue;
            const double dev = std::remainder(lift[i] - omega0, kPi);
            if (std::abs(dev) > 1e-9) {
              parallel_between = false;
              break;
            }
          }
          if (parallel_between && h - gap_lo < 0.5) {
            groups.back().second = h;
            continue;
          }
        }
        groups.push_back({h, h});
      }
      for (const auto& [glo, ghi] : groups) {
        const double s = (glo + ghi) / 2;
        if (!(s > 1e-6 && s < 1 - 1e-6)) continue;
        const FlowDirection v = direction_at(f.directions, s);
        const bool flip = v.a * static_cast<double>(P) + v.b * static_cast<double>(Q) < 0;
        loci.push_back({s, flip ? PrimitiveOrbitClass{-P, -Q} : PrimitiveOrbitClass{P, Q}});
      }
    }
  }
  for (const auto& extra : extra_loci) {
    std::erase_if(loci, [&](const RationalLocus& l) {
      return std::abs(l.s - extra.s) <= 1e-9;
    });
    loci.push_back(extra);
  }
  std::sort(loci.begin(), loci.end(),
            [](const RationalLocus& a, const RationalLocus& b) { return a.s < b.s; });
  // Collisions between distinct primitive directions cannot occur at one s;
  // tolerance collisions keep the earlier (smaller) class.
  std::vector<RationalLocus> dedup;
  for (const auto& l : loci) {
    if (!dedup.empty() && l.s - dedup.back().s < 1e-9) continue;
    dedup.push_back(l);
  }
  f.rational_loci = std::move(dedup);

  FoliatedManifold m;
  m.families.push_back(std::move(f));
  return m;
}

}  // namespace birksec
