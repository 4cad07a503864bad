#include "birksec/homology.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace birksec {

GcdDecomposition gcd_components(const HomologyClass& c) {
  if (c.is_zero()) {
    throw std::invalid_argument("no transverse curve of (0,0)-type");
  }
  const std::int64_t l = std::gcd(std::llabs(c.p), std::llabs(c.q));
  return {l, {c.p / l, c.q / l}};
}

double cross(const FlowDirection& v, const HomologyClass& c) {
  return v.a * static_cast<double>(c.q) - v.b * static_cast<double>(c.p);
}

double signed_area(const HomologyClass& c, const FlowDirection& v) {
  return static_cast<double>(c.p) * v.b - static_cast<double>(c.q) * v.a;
}

bool admits_transverse_curve(const HomologyClass& c, const FlowDirection& v,
                             double tol) {
  if (c.is_zero()) return false;
  const double cn = std::hypot(static_cast<double>(c.p), static_cast<double>(c.q));
  const double vn = std::hypot(v.a, v.b);
  if (vn == 0.0) return false;
  return std::abs(cross(v, c)) > tol * cn * vn;
}

bool is_positively_transverse(const HomologyClass& c, const FlowDirection& v) {
  return signed_area(c, v) > 0.0;
}

BasisDecomposition decompose_in_section_basis(const HomologyClass& c,
                                              const PrimitiveOrbitClass& orbit,
                                              const HomologyClass& h) {
  const std::int64_t det = h.p * orbit.Q - h.q * orbit.P;
  if (det != 1 && det != -1) {
    throw std::invalid_argument("basis {h, (P,Q)} is not unimodular");
  }
  // Cramer on [h (P,Q)] [alpha beta]^T = c.
  const std::int64_t alpha = (c.p * orbit.Q - c.q * orbit.P) / det;
  const std::int64_t beta = (h.p * c.q - h.q * c.p) / det;
  return {alpha, beta};
}

std::string to_string(const HomologyClass& c) {
  return "(" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
}

}  // namespace birksec
