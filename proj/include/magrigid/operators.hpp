// Magnetic translations, flux quantization and the leading Hadamard
// coefficient, checked numerically on analytically given test functions.
#ifndef MAGRIGID_OPERATORS_HPP_
#define MAGRIGID_OPERATORS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "magrigid/fields.hpp"

namespace magrigid {

/// Complex samples on the nodes origin + (i/N) e1 + (j/N) e2, 0 <= i < N*cells1,
/// 0 <= j < N*cells2. Translating by e1 or e2 is an exact shift by N nodes.
class GridFunction {
 public:
  GridFunction(Lattice lattice, Vec2 origin, int resolution, int cells1, int cells2,
               std::vector<Complex> samples);

  static GridFunction sample(const Lattice& lattice, Vec2 origin, int resolution, int cells1,
                             int cells2, const std::function<Complex(Vec2)>& fn);

  const Lattice& lattice() const { return lattice_; }
  Vec2 origin() const { return origin_; }
  int resolution() const { return resolution_; }
  int cells1() const { return cells1_; }
  int cells2() const { return cells2_; }
  int size1() const { return resolution_ * cells1_; }
  int size2() const { return resolution_ * cells2_; }

  Vec2 point(int i, int j) const;
  Complex at(int i, int j) const { return samples_[index(i, j)]; }
  const std::vector<Complex>& samples() const { return samples_; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(size2()) +
           static_cast<std::size_t>(j);
  }

  Lattice lattice_;
  Vec2 origin_;
  int resolution_;
  int cells1_;
  int cells2_;
  std::vector<Complex> samples_;
};

/// v_j = -A0(e_j), the phase vector that makes T_j commute with H.
Vec2 translation_phase_vector(const Lattice& lattice, double b0, int j);

/// (T_j u)(x) = exp(i v_j . x) u(x + e_j) on the part of the grid where x + e_j
/// stays inside. Throws InputError when u spans fewer than two cells along e_j.
GridFunction magnetic_translate(int j, const GridFunction& u, double b0);
GridFunction magnetic_translate(int j, const GridFunction& u, Vec2 v);

/// exp(i v2 . e1) - exp(i v1 . e2) = -2i sin(pi l); zero iff l is an integer.
Complex commutator_phase(const Lattice& lattice, double b0);

using TestFunction = std::function<Complex(Vec2)>;

/// (i d + A)^2 w + V w at x, with 4th-order centered differences of step h.
Complex apply_hamiltonian(const TestFunction& w, const MagneticPotential& pot,
                          const FourierField2D& V, Vec2 x, double h);

/// max over probes of |H(T_j u) - T_j(H u)|. With the default phase vector the
/// operators commute and only the O(h^4) differencing error remains.
double H_commutation_residual(const TestFunction& u, const MagneticPotential& pot,
                              const FourierField2D& V, int j, double h,
                              std::span<const Vec2> probes,
                              std::optional<Vec2> v_override = std::nullopt);

/// a0(x, y) = exp(i int_0^1 (x - y) . A(y + s (x - y)) ds), in closed form.
Complex a0(Vec2 x, Vec2 y, const MagneticPotential& pot);

/// |r . grad_x a0(x, y) - i A(x) . r a0(x, y)| with r = x - y and the gradient
/// by central differences of step h.
double transport_residual(Vec2 x, Vec2 y, const MagneticPotential& pot, double h);

}  // namespace magrigid

#endif  // MAGRIGID_OPERATORS_HPP_
