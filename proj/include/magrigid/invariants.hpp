// Forward problem: the invariants F_k(delta), G_k(delta) of a field pair (B, V),
// and the two-dimensional integrals I(d), J(d) they reduce from.
//
// For a canonical direction delta with magnetic profile A1_delta and potential
// profile V_delta, with y(s) = s + A1_delta(s) / b0 and flux integer l,
//
//   F_k(delta) = int_0^1 exp(-2 pi i k l y(s)) ds,
//   G_k(delta) = int_0^1 V_delta(s) exp(-2 pi i k l y(s)) ds.
//
// F_{-k} = conj(F_k), G_{-k} = conj(G_k), F_0 = 1 and G_0 = 0.
#ifndef MAGRIGID_INVARIANTS_HPP_
#define MAGRIGID_INVARIANTS_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "magrigid/fields.hpp"

namespace magrigid {

/// y(s) = s + A1_delta(s) / b0.
double y_map(const DirectionalProfile& a1, double b0, double s);

/// N-point trapezoid value of F_k. Throws InputError unless N >= 64 and
/// N >= 8 (|k l| + bandwidth).
Complex F_coeff(const DirectionalProfile& a1, double b0, std::int64_t l, std::int64_t k,
                std::int64_t n_points);

/// N-point trapezoid value of G_k, with the same sampling requirement.
Complex G_coeff(const DirectionalProfile& v, const DirectionalProfile& a1, double b0,
                std::int64_t l, std::int64_t k, std::int64_t n_points);

/// int_0^1 f(y(s)) ds for f(y) = sum_k f_k exp(-2 pi i k l y), real f (f_{-k} =
/// conj f_k), evaluated as sum_k f_k F_k.
double pushforward_functional(const std::map<std::int64_t, Complex>& f, const DirectionalProfile& a1,
                              double b0, std::int64_t l, std::int64_t n_points);

/// Where I(d) lands in the reduced invariants: I(d) = Area * F_harmonic(delta)
/// and J(d) = Area * G_harmonic(delta) (V part), with |harmonic| = k the
/// multiplicity of d.
struct InvariantLocation {
  PrimitiveDirection direction;
  std::int64_t harmonic;
};

InvariantLocation locate_invariant(LatticeIndex d);

/// int_D exp(-i A0(d) . x + i int_0^1 d . A(x + s d) ds) dx by an n2 x n2
/// trapezoid over the fundamental cell, with the inner line integral in closed form.
Complex I_full(LatticeIndex d, const MagneticPotential& pot, std::int64_t n2);

/// The V part of J(d): the same integral weighted by int_0^1 V(x + s d) ds.
Complex J_full_Vpart(LatticeIndex d, const FourierField2D& V, const MagneticPotential& pot,
                     std::int64_t n2);

struct DirectionInvariants {
  PrimitiveDirection direction;
  std::vector<Complex> F;  // F[k-1], k = 1..K
  std::vector<Complex> G;
};

struct InvariantSet {
  Lattice lattice;
  double b0 = 0.0;
  std::int64_t l = 1;
  std::int64_t K = 0;
  std::int64_t N = 0;
  double jacobian = 0.0;  // c(d) = Area(D) for every d
  std::vector<DirectionInvariants> directions;  // sorted by direction

  const DirectionInvariants* find(const PrimitiveDirection& delta) const;
  /// F_k for any integer k, using F_0 = 1 and F_{-k} = conj(F_k).
  Complex F(const PrimitiveDirection& delta, std::int64_t k) const;
  Complex G(const PrimitiveDirection& delta, std::int64_t k) const;
};

struct ForwardParams {
  std::int64_t max_primitive_norm = 4;
  std::int64_t K = 64;
  std::int64_t N = 0;  // 0 selects default_quadrature_points
  bool require_hypothesis = true;
};

/// max(256, 16 K |l|, 16 bandwidth).
std::int64_t default_quadrature_points(std::int64_t K, std::int64_t l, std::int64_t bandwidth);

/// F_k, G_k for every canonical direction up to max_primitive_norm and
/// k = 1..K. Requires flux integer l = +-1 and, unless disabled, a positive
/// hypothesis margin (HypothesisError otherwise).
InvariantSet compute_invariant_set(const FourierField2D& B, const FourierField2D& V,
                                   const ForwardParams& params);

}  // namespace magrigid

#endif  // MAGRIGID_INVARIANTS_HPP_
