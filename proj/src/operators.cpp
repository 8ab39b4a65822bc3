#include "magrigid/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace magrigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

Complex unit_phase(double t) { return std::polar(1.0, kTwoPi * (t - std::nearbyint(t))); }

double divergence_A(const MagneticPotential& pot, Vec2 x) {
  const auto [u, v] = pot.lattice.coords(x);
  double div = 0.0;
  for (const auto& [beta, c] : pot.a1) {
    const Vec2 k = pot.lattice.dual(beta);
    const Complex ph =
        unit_phase(static_cast<double>(beta.m) * u + static_cast<double>(beta.n) * v);
    div += std::real(Complex(0.0, kTwoPi) * (k.x * c.x + k.y * c.y) * ph);
  }
  return div;
}

// (exp(it) - 1) / (it), stable near t = 0.
Complex segment_factor(double t) {
  const double half = 0.5 * t;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return std::polar(sinc, half);
}

}  // namespace

GridFunction::GridFunction(Lattice lattice, Vec2 origin, int resolution, int cells1, int cells2,
                           std::vector<Complex> samples)
    : lattice_(lattice),
      origin_(origin),
      resolution_(resolution),
      cells1_(cells1),
      cells2_(cells2),
      samples_(std::move(samples)) {
  if (resolution_ < 16) throw InputError("grid resolution must be at least 16 per cell");
  if (cells1_ < 1 || cells2_ < 1) throw InputError("grid must cover at least one cell");
  if (samples_.size() != static_cast<std::size_t>(size1()) * static_cast<std::size_t>(size2())) {
    throw InputError("grid sample count does not match its shape");
  }
}

GridFunction GridFunction::sample(const Lattice& lattice, Vec2 origin, int resolution, int cells1,
                                  int cells2, const std::function<Complex(Vec2)>& fn) {
  const int n1 = resolution * cells1;
  const int n2 = resolution * cells2;
  std::vector<Complex> samples;
  samples.reserve(static_cast<std::size_t>(std::max(n1, 0)) * static_cast<std::size_t>(std::max(n2, 0)));
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      samples.push_back(fn(origin + lattice.point(static_cast<double>(i) / resolution,
                                                  static_cast<double>(j) / resolution)));
    }
  }
  return GridFunction(lattice, origin, resolution, cells1, cells2, std::move(samples));
}

Vec2 GridFunction::point(int i, int j) const {
  return origin_ + lattice_.point(static_cast<double>(i) / resolution_,
                                  static_cast<double>(j) / resolution_);
}

Vec2 translation_phase_vector(const Lattice& lattice, double b0, int j) {
  if (j != 1 && j != 2) throw InputError("translation index must be 1 or 2");
  const Vec2 a = eval_A0(b0, j == 1 ? lattice.e1() : lattice.e2());
  return {-a.x, -a.y};
}

GridFunction magnetic_translate(int j, const GridFunction& u, double b0) {
  return magnetic_translate(j, u, translation_phase_vector(u.lattice(), b0, j));
}

GridFunction magnetic_translate(int j, const GridFunction& u, Vec2 v) {
  if (j != 1 && j != 2) throw InputError("translation index must be 1 or 2");
  const int c1 = j == 1 ? u.cells1() - 1 : u.cells1();
  const int c2 = j == 2 ? u.cells2() - 1 : u.cells2();
  if (c1 < 1 || c2 < 1) throw InputError("translation by e_j leaves the grid");
  const int shift1 = j == 1 ? u.resolution() : 0;
  const int shift2 = j == 2 ? u.resolution() : 0;
  const int n1 = u.resolution() * c1;
  const int n2 = u.resolution() * c2;
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i) {
    for (int k = 0; k < n2; ++k) {
      out.push_back(std::polar(1.0, dot(v, u.point(i, k))) * u.at(i + shift1, k + shift2));
    }
  }
  return GridFunction(u.lattice(), u.origin(), u.resolution(), c1, c2, std::move(out));
}

Complex commutator_phase(const Lattice& lattice, double b0) {
  const Vec2 v1 = translation_phase_vector(lattice, b0, 1);
  const Vec2 v2 = translation_phase_vector(lattice, b0, 2);
  return std::polar(1.0, dot(v2, lattice.e1())) - std::polar(1.0, dot(v1, lattice.e2()));
}

Complex apply_hamiltonian(const TestFunction& w, const MagneticPotential& pot,
                          const FourierField2D& V, Vec2 x, double h) {
  const Vec2 ex{h, 0.0};
  const Vec2 ey{0.0, h};
  const Complex w0 = w(x);
  const Complex xp1 = w(x + ex), xm1 = w(x - ex), xp2 = w(x + 2.0 * ex), xm2 = w(x - 2.0 * ex);
  const Complex yp1 = w(x + ey), ym1 = w(x - ey), yp2 = w(x + 2.0 * ey), ym2 = w(x - 2.0 * ey);
  const Complex dx = (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12.0 * h);
  const Complex dy = (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12.0 * h);
  const Complex dxx = (-xp2 + 16.0 * xp1 - 30.0 * w0 + 16.0 * xm1 - xm2) / (12.0 * h * h);
  const Complex dyy = (-yp2 + 16.0 * yp1 - 30.0 * w0 + 16.0 * ym1 - ym2) / (12.0 * h * h);
  const Vec2 a = eval_A(pot, x);
  return -(dxx + dyy) + 2.0 * kI * (a.x * dx + a.y * dy) + kI * divergence_A(pot, x) * w0 +
         (dot(a, a) + eval_field(V, x)) * w0;
}

double H_commutation_residual(const TestFunction& u, const MagneticPotential& pot,
                              const FourierField2D& V, int j, double h,
                              std::span<const Vec2> probes, std::optional<Vec2> v_override) {
  const Vec2 v = v_override.value_or(translation_phase_vector(pot.lattice, pot.b0, j));
  const Vec2 ej = j == 1 ? pot.lattice.e1() : pot.lattice.e2();
  const TestFunction translated = [&](Vec2 x) { return std::polar(1.0, dot(v, x)) * u(x + ej); };
  double worst = 0.0;
  for (const Vec2 x : probes) {
    const Complex lhs = apply_hamiltonian(translated, pot, V, x, h);
    const Complex rhs = std::polar(1.0, dot(v, x)) * apply_hamiltonian(u, pot, V, x + ej, h);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

Complex a0(Vec2 x, Vec2 y, const MagneticPotential& pot) {
  const Vec2 r = x - y;
  // The A0 integrand is constant along the segment because r . A0(r) = 0.
  double phase = 0.5 * pot.b0 * (r.x * y.y - r.y * y.x);
  const auto [yu, yv] = pot.lattice.coords(y);
  const auto [ru, rv] = pot.lattice.coords(r);
  Complex a1_part{};
  for (const auto& [beta, c] : pot.a1) {
    const double bm = static_cast<double>(beta.m);
    const double bn = static_cast<double>(beta.n);
    a1_part += (r.x * c.x + r.y * c.y) * unit_phase(bm * yu + bn * yv) *
               segment_factor(kTwoPi * (bm * ru + bn * rv));
  }
  phase += std::real(a1_part);
  return std::polar(1.0, phase);
}

double transport_residual(Vec2 x, Vec2 y, const MagneticPotential& pot, double h) {
  const Vec2 r = x - y;
  const Vec2 ex{h, 0.0};
  const Vec2 ey{0.0, h};
  const Complex gx = (a0(x + ex, y, pot) - a0(x - ex, y, pot)) / (2.0 * h);
  const Complex gy = (a0(x + ey, y, pot) - a0(x - ey, y, pot)) / (2.0 * h);
  const Vec2 a = eval_A(pot, x);
  return std::abs(r.x * gx + r.y * gy - kI * dot(a, r) * a0(x, y, pot));
}

}  // namespace magrigid
