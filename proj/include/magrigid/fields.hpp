// Band-limited real periodic fields on R^2/L, the magnetic potential built
// from a field B, and one-dimensional directional profiles.
#ifndef MAGRIGID_FIELDS_HPP_
#define MAGRIGID_FIELDS_HPP_

#include <complex>
#include <cstdint>
#include <map>

#include "magrigid/lattice.hpp"

namespace magrigid {

using Complex = std::complex<double>;

/// mean + sum_beta c_beta exp(2 pi i beta . x) with finitely many nonzero
/// coefficients. The (0,0) coefficient is stored as `mean`, never in the map,
/// and coefficients are Hermitian: c(-beta) = conj(c(beta)).
class FourierField2D {
 public:
  explicit FourierField2D(Lattice lattice, double mean = 0.0);

  /// Validates Hermitian symmetry (relative tolerance 1e-12) and the absence
  /// of a (0,0) entry. Throws InputError otherwise.
  FourierField2D(Lattice lattice, double mean, std::map<DualIndex, Complex> coeffs);

  const Lattice& lattice() const { return lattice_; }
  double mean() const { return mean_; }
  const std::map<DualIndex, Complex>& coeffs() const { return coeffs_; }

  /// Sets c(beta) and c(-beta) = conj(c). A zero value erases the pair.
  void set(DualIndex beta, Complex c);
  Complex coeff(DualIndex beta) const;
  /// max(|m|, |n|) over the support; 0 for a constant field.
  std::int64_t max_index() const;

  friend bool operator==(const FourierField2D&, const FourierField2D&) = default;

 private:
  Lattice lattice_;
  double mean_;
  std::map<DualIndex, Complex> coeffs_;
};

/// Raw sum, including the imaginary residue left by rounding.
Complex eval_field_complex(const FourierField2D& field, Vec2 x);
double eval_field(const FourierField2D& field, Vec2 x);

struct CVec2 {
  Complex x;
  Complex y;
};

/// A = A0 + A1 with A0(x) = (b0/2) (x2, -x1) and A1 periodic,
/// A1(x) = sum_beta a1[beta] exp(2 pi i beta . x).
struct MagneticPotential {
  Lattice lattice;
  double b0 = 0.0;
  std::map<DualIndex, CVec2> a1;
};

/// A1 coefficients b_beta (beta2, -beta1) / (2 pi i |beta|^2), Cartesian beta.
/// The result satisfies d2 A1 - d1 A2 = B - b0 and div A1 = 0.
MagneticPotential build_potential(const FourierField2D& B);

Vec2 eval_A0(double b0, Vec2 x);
Vec2 eval_A(const MagneticPotential& pot, Vec2 x);

/// Coefficients of d2 A1_1 - d1 A1_2.
std::map<DualIndex, Complex> spectral_curl(const MagneticPotential& pot);
/// Coefficients of d1 A1_1 + d2 A1_2.
std::map<DualIndex, Complex> spectral_divergence(const MagneticPotential& pot);

/// A 1-periodic trigonometric polynomial sum_p c_p exp(2 pi i p s), Hermitian in p.
class DirectionalProfile {
 public:
  DirectionalProfile() = default;
  explicit DirectionalProfile(std::map<std::int64_t, Complex> coeffs);

  const std::map<std::int64_t, Complex>& coeffs() const { return coeffs_; }
  Complex coeff(std::int64_t p) const;
  bool mean_zero() const { return !coeffs_.contains(0); }
  bool empty() const { return coeffs_.empty(); }
  std::int64_t bandwidth() const;

  double eval(double s) const;
  Complex eval_complex(double s) const;
  /// Coefficients 2 pi i p c_p.
  DirectionalProfile derivative() const;

  friend bool operator==(const DirectionalProfile&, const DirectionalProfile&) = default;

 private:
  std::map<std::int64_t, Complex> coeffs_;
};

/// Profile coefficient at p is the field coefficient at p*delta.
DirectionalProfile project_direction(const FourierField2D& field, const PrimitiveDirection& delta);

/// c_p -> c_p / (2 pi i p). Throws InputError when a p = 0 term is present.
DirectionalProfile profile_antiderivative(const DirectionalProfile& profile);

/// |b0| - max |B(x) - b0| over a grid x grid sample of the fundamental domain.
/// Throws InputError when grid < 4 * max_index.
double hypothesis_margin(const FourierField2D& B, std::int64_t grid);
/// max(64, 8 * max_index): the sample density used for admissibility decisions.
std::int64_t default_margin_grid(const FourierField2D& B);

/// (1/1) integral_0^1 field(x + s d) ds in closed form: the mean plus the terms
/// with beta . d = 0.
double line_average(const FourierField2D& field, Vec2 x, LatticeIndex d);

/// A random magnetic field with b0 = b0_for_unit_flux(lattice, +1), coefficients
/// on max(|m|,|n|) <= max_index, scaled so that
/// hypothesis_margin(B, default_margin_grid(B)) >= target_margin * |b0|.
FourierField2D random_admissible_field(std::uint64_t seed, const Lattice& lattice,
                                       std::int64_t max_index, double target_margin);

/// A random mean-zero potential with max |V| = amplitude on the default grid.
FourierField2D random_potential_field(std::uint64_t seed, const Lattice& lattice,
                                      std::int64_t max_index, double amplitude);

/// max |field - mean| over a grid x grid sample of the fundamental domain.
double max_deviation(const FourierField2D& field, std::int64_t grid);

}  // namespace magrigid

#endif  // MAGRIGID_FIELDS_HPP_
