#ifndef BIRKSEC_HOMOLOGY_HPP
#define BIRKSEC_HOMOLOGY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace birksec {

// First-homology class of a curve on the 2-torus, in the fixed global basis:
// first coordinate = horizontal generator, second = vertical generator.
// Stored exactly; never use floating point for classes.
struct HomologyClass {
  std::int64_t p = 0;
  std::int64_t q = 0;

  friend bool operator==(const HomologyClass&, const HomologyClass&) = default;
  friend HomologyClass operator+(HomologyClass a, HomologyClass b) {
    return {a.p + b.p, a.q + b.q};
  }
  friend HomologyClass operator-(HomologyClass a, HomologyClass b) {
    return {a.p - b.p, a.q - b.q};
  }
  friend HomologyClass operator*(std::int64_t m, HomologyClass c) {
    return {m * c.p, m * c.q};
  }
  HomologyClass operator-() const { return {-p, -q}; }
  bool is_zero() const { return p == 0 && q == 0; }
};

// Tangent vector of the linear motion on a torus, up to positive scaling.
struct FlowDirection {
  double a = 0.0;
  double b = 0.0;
};

// Class of the simple periodic orbits on a rational invariant torus.
// gcd(|P|,|Q|) = 1 and (P,Q) != (0,0).
struct PrimitiveOrbitClass {
  std::int64_t P = 0;
  std::int64_t Q = 0;

  friend bool operator==(const PrimitiveOrbitClass&, const PrimitiveOrbitClass&) = default;
  HomologyClass as_class() const { return {P, Q}; }
};

// Default tolerance for parallelism tests on normalized cross products.
inline constexpr double kParallelTol = 1e-9;

struct GcdDecomposition {
  std::int64_t count = 0;        // number of connected components
  HomologyClass primitive;       // class of each component
};

// Splits a nonzero class into gcd(|p|,|q|) parallel primitive components.
// Throws on the zero class: there is no transverse curve of (0,0)-type.
GcdDecomposition gcd_components(const HomologyClass& c);

// a*q - b*p, the determinant det[v; c] with rows (a,b),(p,q).
double cross(const FlowDirection& v, const HomologyClass& c);

// det[c; v] with rows (p,q),(a,b). Positive means c crosses v positively.
double signed_area(const HomologyClass& c, const FlowDirection& v);

// True iff some orientation of a (p,q)-curve can be made transverse to the
// motion in direction v: c != 0 and c is not projectively parallel to v.
bool admits_transverse_curve(const HomologyClass& c, const FlowDirection& v,
                             double tol = kParallelTol);

// Sign-resolved transversality: det[c; v] > 0.
bool is_positively_transverse(const HomologyClass& c, const FlowDirection& v);

struct BasisDecomposition {
  std::int64_t alpha = 0;  // coefficient of h (the horizontal line of the cut coordinates)
  std::int64_t beta = 0;   // coefficient of the orbit class (P,Q)
};

// Writes c = alpha*h + beta*(P,Q) in the rectangle coordinates of a
// non-transversal torus. Requires det{h,(P,Q)} = +-1; alpha does not depend
// on the choice of h within h + m*(P,Q).
BasisDecomposition decompose_in_section_basis(const HomologyClass& c,
                                              const PrimitiveOrbitClass& orbit,
                                              const HomologyClass& h);

std::string to_string(const HomologyClass& c);

}  // namespace birksec

#endif
