// Geometry of a rank-2 lattice L in the plane and of its dual L*.
//
// Integer coordinates are kept separate from Cartesian vectors: a DualIndex
// (m, n) names the dual vector m*e1s + n*e2s, a LatticeIndex (m, n) names the
// lattice vector m*e1 + n*e2, and their pairing is the integer m*m' + n*n'.
#ifndef MAGRIGID_LATTICE_HPP_
#define MAGRIGID_LATTICE_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "magrigid/errors.hpp"

namespace magrigid {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Integer coordinates of a dual-lattice vector in the basis {e1s, e2s}.
struct DualIndex {
  std::int64_t m = 0;
  std::int64_t n = 0;

  constexpr DualIndex operator-() const { return {-m, -n}; }
  friend constexpr auto operator<=>(const DualIndex&, const DualIndex&) = default;
};

/// Integer coordinates of a lattice vector in the basis {e1, e2}.
struct LatticeIndex {
  std::int64_t m = 0;
  std::int64_t n = 0;

  constexpr LatticeIndex operator-() const { return {-m, -n}; }
  friend constexpr auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

constexpr std::int64_t pairing(DualIndex beta, LatticeIndex d) { return beta.m * d.m + beta.n * d.n; }

/// A primitive dual direction a*e1s + b*e2s with gcd(|a|,|b|) = 1, kept in the
/// canonical half-plane b > 0 or (b == 0 and a > 0).
class PrimitiveDirection {
 public:
  /// Throws InputError unless (a, b) is primitive and canonical.
  PrimitiveDirection(std::int64_t a, std::int64_t b);

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  DualIndex index() const { return {a_, b_}; }
  /// The dual index p*delta.
  DualIndex multiple(std::int64_t p) const { return {p * a_, p * b_}; }

  friend auto operator<=>(const PrimitiveDirection&, const PrimitiveDirection&) = default;

 private:
  std::int64_t a_;
  std::int64_t b_;
};

/// A primitive direction together with the sign relating it to the raw input:
/// raw = sign * direction.
struct SignedDirection {
  PrimitiveDirection direction;
  int sign;
};

/// Puts a nonzero primitive pair into the canonical half-plane.
SignedDirection canonicalize(std::int64_t a, std::int64_t b);

std::pair<Vec2, Vec2> dual_basis(Vec2 e1, Vec2 e2);

class Lattice {
 public:
  /// Throws InputError when the basis is degenerate.
  Lattice(Vec2 e1, Vec2 e2);

  Vec2 e1() const { return e1_; }
  Vec2 e2() const { return e2_; }
  Vec2 e1s() const { return e1s_; }
  Vec2 e2s() const { return e2s_; }
  double det() const { return det_; }
  double area() const { return det_ < 0 ? -det_ : det_; }
  int orientation() const { return det_ < 0 ? -1 : 1; }

  Vec2 point(LatticeIndex d) const;
  Vec2 point(double u, double v) const;  // u*e1 + v*e2
  Vec2 dual(DualIndex beta) const;
  /// Fractional lattice coordinates (x . e1s, x . e2s).
  std::array<double, 2> coords(Vec2 x) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Vec2 e1_, e2_, e1s_, e2s_;
  double det_;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool is_integer() const { return den == 1; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// The flux integer l = b0 * det(e1, e2) / (2 pi). `rational` is empty when the
/// value is not within 1e-9 of a fraction with denominator <= 64.
struct FluxQuantization {
  double value = 0.0;
  std::optional<Rational> rational;

  bool quantized() const { return rational.has_value(); }
  bool is_unit() const { return rational && rational->den == 1 && (rational->num == 1 || rational->num == -1); }
};

inline constexpr std::int64_t kFluxDenominatorCap = 64;
inline constexpr double kFluxTolerance = 1e-9;

/// Best rational approximation by continued fractions; empty when no convergent
/// with denominator <= cap lies within tol.
std::optional<Rational> detect_rational(double x, std::int64_t cap = kFluxDenominatorCap,
                                        double tol = kFluxTolerance);

FluxQuantization flux_integer(const Lattice& lattice, double b0);

/// |b0| = 2 pi / Area(D), with the sign of b0 given by `b0_sign`.
double b0_for_unit_flux(const Lattice& lattice, int b0_sign);

struct GenericityResult {
  bool generic = true;
  std::optional<std::pair<LatticeIndex, LatticeIndex>> witness;
};

/// Checks that nonzero lattice vectors of length <= radius have pairwise distinct
/// lengths up to sign. Lengths are compared on squares with relative tolerance 1e-10.
GenericityResult is_generic(const Lattice& lattice, double radius);

struct PrimitiveDecomposition {
  std::int64_t k;
  std::int64_t m0;
  std::int64_t n0;
};

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// (m, n) = k * (m0, n0) with k = gcd(|m|, |n|).
PrimitiveDecomposition primitive_decompose(std::int64_t m, std::int64_t n);

/// The dual direction (-n0, m0) orthogonal to m0*e1 + n0*e2, canonicalized.
SignedDirection perp_primitive(std::int64_t m0, std::int64_t n0);

/// {delta, delta'} is a unimodular basis of L* (determinant +1) and
/// {gamma, gamma'} is its dual basis in L.
struct BasisCompletion {
  DualIndex delta_prime;
  LatticeIndex gamma;
  LatticeIndex gamma_prime;
};

BasisCompletion complete_basis(const PrimitiveDirection& delta);

/// All canonical primitive directions with max(|a|, |b|) <= max_sup_norm,
/// sorted lexicographically by (a, b).
std::vector<PrimitiveDirection> enumerate_primitive_directions(std::int64_t max_sup_norm);

/// The sublattice generated by {q*e1, e2}. If L carries flux 1/q, it carries flux 1.
Lattice unit_flux_sublattice(const Lattice& lattice, std::int64_t q);

}  // namespace magrigid

#endif  // MAGRIGID_LATTICE_HPP_
