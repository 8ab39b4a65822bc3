#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "magrigid/operators.hpp"

using namespace magrigid;

namespace {

constexpr double kPi = std::numbers::pi;
const Lattice kSquare({1, 0}, {0, 1});
const Lattice kOblique({1, 0}, {0.3, 1.1});

Complex bump(Vec2 x) {
  const Vec2 c{0.9, 1.2};
  const Vec2 r = x - c;
  return std::exp(-dot(r, r) / 0.8) * std::polar(1.0, 1.3 * x.x - 0.7 * x.y);
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  REQUIRE(a.size1() == b.size1());
  REQUIRE(a.size2() == b.size2());
  double worst = 0.0;
  for (int i = 0; i < a.size1(); ++i) {
    for (int j = 0; j < a.size2(); ++j) worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
  }
  return worst;
}

std::vector<Vec2> probes() { return {{0.4, 0.5}, {1.0, 1.1}, {1.3, 0.2}, {0.2, 1.6}}; }

}  // namespace

TEST_CASE("magnetic_translate examples") {
  const auto one = GridFunction::sample(kSquare, {0, 0}, 16, 2, 2, [](Vec2) { return Complex(1); });
  const auto t0 = magnetic_translate(1, one, 0.0);
  for (const auto& s : t0.samples()) CHECK(s == Complex(1));

  const auto t = magnetic_translate(1, one, 2 * kPi);
  CHECK(t.cells1() == 1);
  CHECK(t.cells2() == 2);
  for (int i = 0; i < t.size1(); ++i) {
    for (int j = 0; j < t.size2(); ++j) {
      const Vec2 x = t.point(i, j);
      CHECK(std::abs(t.at(i, j) - std::polar(1.0, kPi * x.y)) <= 1e-14);
    }
  }

  const auto thin = GridFunction::sample(kSquare, {0, 0}, 16, 1, 2, [](Vec2) { return Complex(1); });
  CHECK_THROWS_AS(magnetic_translate(1, thin, 1.0), InputError);
  CHECK_NOTHROW(magnetic_translate(2, thin, 1.0));
  CHECK_THROWS_AS(magnetic_translate(3, one, 1.0), InputError);
  CHECK_THROWS_AS(GridFunction::sample(kSquare, {0, 0}, 8, 2, 2, bump), InputError);
}

TEST_CASE("translating twice composes the phases") {
  const double b0 = b0_for_unit_flux(kOblique, 1);
  const auto u = GridFunction::sample(kOblique, {-0.5, -0.5}, 24, 3, 3, bump);
  for (int j : {1, 2}) {
    const auto twice = magnetic_translate(j, magnetic_translate(j, u, b0), b0);
    const Vec2 v = translation_phase_vector(kOblique, b0, j);
    const Vec2 e = j == 1 ? kOblique.e1() : kOblique.e2();
    double worst = 0.0;
    for (int i = 0; i < twice.size1(); ++i) {
      for (int k = 0; k < twice.size2(); ++k) {
        const Vec2 x = twice.point(i, k);
        const Complex expected = std::polar(1.0, dot(v, 2.0 * x + e)) * bump(x + 2.0 * e);
        worst = std::max(worst, std::abs(twice.at(i, k) - expected));
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("commutator_phase") {
  const double unit = b0_for_unit_flux(kOblique, 1);
  CHECK(std::abs(commutator_phase(kOblique, unit)) <= 1e-14);
  CHECK(std::abs(commutator_phase(kOblique, 3 * unit)) <= 1e-14);
  CHECK(std::abs(commutator_phase(kOblique, 0.5 * unit)) == doctest::Approx(2.0).epsilon(1e-14));
  for (double l : {0.1, 0.25, 0.7, 1.3}) {
    CHECK(std::abs(commutator_phase(kOblique, l * unit)) ==
          doctest::Approx(2.0 * std::abs(std::sin(kPi * l))).epsilon(1e-13));
  }
}

TEST_CASE("[T1, T2] vanishes exactly for integer flux") {
  const double unit = b0_for_unit_flux(kOblique, 1);
  const auto u = GridFunction::sample(kOblique, {-0.4, -0.3}, 16, 3, 3, bump);
  double peak = 0.0;
  for (const auto& s : u.samples()) peak = std::max(peak, std::abs(s));
  for (double l : {1.0, 2.0, -1.0, 0.5}) {
    const double b0 = l * unit;
    const auto t12 = magnetic_translate(1, magnetic_translate(2, u, b0), b0);
    const auto t21 = magnetic_translate(2, magnetic_translate(1, u, b0), b0);
    const double diff = max_abs_diff(t12, t21);
    if (l == 0.5) {
      // |T1 T2 u - T2 T1 u| = |commutator| |u(x + e1 + e2)|
      double shifted_peak = 0.0;
      for (int i = 0; i < t12.size1(); ++i) {
        for (int j = 0; j < t12.size2(); ++j) {
          shifted_peak = std::max(shifted_peak, std::abs(bump(t12.point(i, j) + kOblique.e1() + kOblique.e2())));
        }
      }
      CHECK(diff == doctest::Approx(2.0 * shifted_peak).epsilon(1e-12));
      CHECK(diff > 0.5 * peak);
    } else {
      CHECK(diff <= 1e-12);
    }
  }
}

TEST_CASE("H commutes with T_j at fourth order") {
  const auto B = random_admissible_field(3, kOblique, 2, 0.3);
  const auto pot = build_potential(B);
  const auto V = random_potential_field(3, kOblique, 2, 1.0);
  const auto pr = probes();
  for (int j : {1, 2}) {
    const double r1 = H_commutation_residual(bump, pot, V, j, 1.0 / 128, pr);
    const double r2 = H_commutation_residual(bump, pot, V, j, 1.0 / 256, pr);
    CHECK(r1 < 1e-4);
    const double ratio = r1 / r2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);

    Vec2 wrong = translation_phase_vector(kOblique, B.mean(), j);
    wrong.x += 0.1;
    const double w1 = H_commutation_residual(bump, pot, V, j, 1.0 / 128, pr, wrong);
    const double w2 = H_commutation_residual(bump, pot, V, j, 1.0 / 256, pr, wrong);
    CHECK(w1 > 1e-2);
    CHECK(w2 > 0.9 * w1);
  }

  // No field: translation commutes with the difference stencil itself.
  const auto free = build_potential(FourierField2D(kSquare, 0.0));
  const FourierField2D zero(kSquare, 0.0);
  const auto periodic = [](Vec2 x) {
    return Complex(std::cos(2 * kPi * x.x) * std::sin(4 * kPi * x.y), std::sin(2 * kPi * x.y));
  };
  CHECK(H_commutation_residual(periodic, free, zero, 1, 1.0 / 128, pr) <= 1e-8);
}

TEST_CASE("a0 examples") {
  const auto B = random_admissible_field(5, kOblique, 3, 0.2);
  const auto pot = build_potential(B);
  CHECK(std::abs(a0({0.3, 0.8}, {0.3, 0.8}, pot) - Complex(1.0)) <= 1e-15);

  const auto flat = build_potential(FourierField2D(kSquare, 2 * kPi));
  CHECK(std::abs(a0({1, 1}, {0, 1}, flat) - Complex(-1.0)) <= 1e-14);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    CHECK(std::abs(std::abs(a0(x, y, pot)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("a0 against a quadrature of the line integral") {
  const auto B = random_admissible_field(6, kOblique, 3, 0.2);
  const auto pot = build_potential(B);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const Vec2 r = x - y;
    // Composite Simpson along the segment.
    const int n = 4000;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double s = static_cast<double>(k) / n;
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += w * dot(r, eval_A(pot, y + s * r));
    }
    const double phase = sum / (3.0 * n);
    CHECK(std::abs(a0(x, y, pot) - std::polar(1.0, phase)) <= 1e-10);
  }
}

TEST_CASE("a0 gauge property") {
  const auto B = random_admissible_field(7, kOblique, 2, 0.2);
  const auto pot = build_potential(B);
  // phi(x) = 2 Re(f e^{2 pi i beta . x}); grad phi has coefficient 2 pi i beta f.
  const DualIndex beta{1, -2};
  const Complex f(0.3, -0.4);
  const Vec2 bc = kOblique.dual(beta);
  const auto phi = [&](Vec2 x) {
    return 2.0 * std::real(f * std::exp(Complex(0, 2 * kPi * dot(bc, x))));
  };
  MagneticPotential gauged = pot;
  const Complex g = Complex(0, 2 * kPi) * f;
  auto add = [&](DualIndex b, CVec2 c) {
    auto& slot = gauged.a1[b];
    slot.x += c.x;
    slot.y += c.y;
  };
  add(beta, {g * bc.x, g * bc.y});
  add(-beta, {std::conj(g) * bc.x, std::conj(g) * bc.y});

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const Complex expected = a0(x, y, pot) * std::polar(1.0, phi(x) - phi(y));
    CHECK(std::abs(a0(x, y, gauged) - expected) <= 1e-12);
  }
}

TEST_CASE("transport residual") {
  const auto B = random_admissible_field(8, kOblique, 3, 0.2);
  const auto pot = build_potential(B);
  CHECK(transport_residual({0.4, 0.1}, {0.4, 0.1}, pot, 1e-4) == 0.0);

  const auto flat = build_potential(FourierField2D(kOblique, b0_for_unit_flux(kOblique, 1)));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    CHECK(transport_residual(x, y, flat, 1e-4) <= 1e-6);
    const double r1 = transport_residual(x, y, pot, 1e-3);
    const double r2 = transport_residual(x, y, pot, 5e-4);
    CHECK(r1 <= 1e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
  }
}
