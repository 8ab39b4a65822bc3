#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "magrigid/lattice.hpp"
#include "oracles/genericity.hpp"

using namespace magrigid;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("dual_basis examples") {
  auto [a1, a2] = dual_basis({1, 0}, {0, 1});
  CHECK(a1 == Vec2{1, 0});
  CHECK(a2 == Vec2{0, 1});

  auto [b1, b2] = dual_basis({1, 0}, {0.3, 1.1});
  CHECK(b1.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b1.y == doctest::Approx(-3.0 / 11.0).epsilon(1e-15));
  CHECK(b2.x == doctest::Approx(0.0));
  CHECK(b2.y == doctest::Approx(10.0 / 11.0).epsilon(1e-15));

  CHECK_THROWS_AS(dual_basis({1, 0}, {2, 0}), InputError);
  CHECK_THROWS_AS(Lattice({1, 0}, {2, 0}), InputError);
  CHECK_THROWS_AS(Lattice({1, 0}, {1, 1e-13}), InputError);
}

TEST_CASE("duality holds to round-off, relative to |e_i*||e_j|") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> logc(0.0, 6.0);
  for (int trial = 0; trial < 500; ++trial) {
    // Near-parallel bases reach condition numbers up to ~1e6.
    const double angle = kPi * u(rng);
    const double gap = std::pow(10.0, -logc(rng));
    const Vec2 e1{std::cos(angle), std::sin(angle)};
    const Vec2 e2 = (1.0 + 0.3 * u(rng)) * Vec2{std::cos(angle + gap), std::sin(angle + gap)};
    const Lattice lat(e1, e2);
    const Vec2 e[2] = {lat.e1(), lat.e2()};
    const Vec2 es[2] = {lat.e1s(), lat.e2s()};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double target = i == j ? 1.0 : 0.0;
        CHECK(std::abs(dot(es[i], e[j]) - target) <= 1e-14 * norm(es[i]) * norm(e[j]));
      }
    }
    CHECK(lat.area() > 0.0);
  }
  // Well-conditioned bases satisfy the identity absolutely.
  for (int trial = 0; trial < 100; ++trial) {
    const Lattice lat = oracle::random_lattice(rng);
    CHECK(std::abs(dot(lat.e1s(), lat.e1()) - 1.0) <= 1e-14);
    CHECK(std::abs(dot(lat.e1s(), lat.e2())) <= 1e-14);
    CHECK(std::abs(dot(lat.e2s(), lat.e1())) <= 1e-14);
    CHECK(std::abs(dot(lat.e2s(), lat.e2()) - 1.0) <= 1e-14);
  }
}

TEST_CASE("flux_integer") {
  const Lattice lat({1, 0}, {0.3, 1.1});
  CHECK(lat.area() == doctest::Approx(1.1));

  auto one = flux_integer(lat, 2 * kPi / 1.1);
  REQUIRE(one.quantized());
  CHECK(*one.rational == Rational{1, 1});
  CHECK(one.is_unit());

  auto two = flux_integer(lat, 4 * kPi / 1.1);
  REQUIRE(two.quantized());
  CHECK(*two.rational == Rational{2, 1});

  auto half = flux_integer(lat, kPi / 1.1);
  REQUIRE(half.quantized());
  CHECK(*half.rational == Rational{1, 2});

  const Lattice square({1, 0}, {0, 1});
  CHECK_FALSE(flux_integer(square, 1.0).quantized());
  CHECK(flux_integer(square, 1.0).value == doctest::Approx(1.0 / (2 * kPi)));

  CHECK_THROWS_AS(flux_integer(square, 0.0), InputError);

  // sign(l) = sign(b0) * orientation
  CHECK(flux_integer(lat, -2 * kPi / 1.1).rational->num == -1);
  const Lattice flipped({0.3, 1.1}, {1, 0});
  CHECK(flipped.orientation() == -1);
  CHECK(flux_integer(flipped, 2 * kPi / 1.1).rational->num == -1);

  // Denominators above the cap are not reported.
  CHECK_FALSE(flux_integer(square, 2 * kPi / 67.0).quantized());
  CHECK(flux_integer(square, 2 * kPi * 5.0 / 64.0).rational == Rational{5, 64});
}

TEST_CASE("b0_for_unit_flux") {
  const Lattice lat({1, 0}, {0.3, 1.1});
  CHECK(b0_for_unit_flux(lat, +1) == doctest::Approx(5.7119866).epsilon(1e-8));
  CHECK(b0_for_unit_flux(Lattice({1, 0}, {0, 1}), -1) == doctest::Approx(-2 * kPi));
  CHECK(flux_integer(lat, b0_for_unit_flux(lat, +1)).rational == Rational{1, 1});

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Lattice r = oracle::random_lattice(rng);
    for (int sign : {-1, 1}) {
      const auto flux = flux_integer(r, b0_for_unit_flux(r, sign));
      CHECK(flux.is_unit());
    }
  }
}

TEST_CASE("is_generic examples") {
  const auto square = is_generic(Lattice({1, 0}, {0, 1}), 2.0);
  CHECK_FALSE(square.generic);
  REQUIRE(square.witness);
  const std::set<LatticeIndex> got{square.witness->first, square.witness->second};
  CHECK(got == std::set<LatticeIndex>{{1, 0}, {0, 1}});

  CHECK(is_generic(Lattice({1, 0}, {0.3, 1.1}), 3.0).generic);
  // Its Gram matrix is rational: |3e1 + e2|^2 = |-2e1 + 3e2|^2 = 12.1.
  const auto oblique = is_generic(Lattice({1, 0}, {0.3, 1.1}), 5.0);
  CHECK_FALSE(oblique.generic);
  REQUIRE(oblique.witness);
  const std::set<LatticeIndex> pair{oblique.witness->first, oblique.witness->second};
  const std::set<std::set<LatticeIndex>> expected{
      {{3, 1}, {-2, 3}}, {{-3, -1}, {2, -3}}, {{3, 1}, {2, -3}}, {{-3, -1}, {-2, 3}}};
  CHECK(expected.contains(pair));
  // Below the shortest vector the condition is vacuous.
  CHECK(is_generic(Lattice({1, 0}, {0, 1}), 0.9).generic);
  CHECK_THROWS_AS(is_generic(Lattice({1, 0}, {0, 1}), 0.0), InputError);
}

TEST_CASE("is_generic agrees with a brute-force double loop") {
  std::mt19937_64 rng(11);
  std::vector<Lattice> lattices{Lattice({1, 0}, {0, 1}), Lattice({1, 0}, {0.5, std::sqrt(3.0) / 2}),
                                Lattice({1, 0}, {0, 2}), Lattice({1, 0}, {0.3, 1.1})};
  for (int i = 0; i < 20; ++i) lattices.push_back(oracle::random_lattice(rng));
  for (const auto& lat : lattices) {
    for (double radius : {0.5, 1.5, 2.5, 3.5, 5.0}) {
      const auto fast = is_generic(lat, radius);
      CHECK(fast.generic == oracle::brute_force_generic(lat, radius));
      if (!fast.generic) {
        const Vec2 a = lat.point(fast.witness->first), b = lat.point(fast.witness->second);
        CHECK(std::abs(dot(a, a) - dot(b, b)) <= 1e-10 * dot(a, a));
        CHECK(fast.witness->first != fast.witness->second);
        CHECK(fast.witness->first != -fast.witness->second);
      }
    }
  }
}

TEST_CASE("primitive_decompose") {
  auto a = primitive_decompose(4, 6);
  CHECK(a.k == 2);
  CHECK(a.m0 == 2);
  CHECK(a.n0 == 3);
  auto b = primitive_decompose(0, 5);
  CHECK(b.k == 5);
  CHECK(b.m0 == 0);
  CHECK(b.n0 == 1);
  auto c = primitive_decompose(-3, 1);
  CHECK(c.k == 1);
  CHECK(c.m0 == -3);
  CHECK(c.n0 == 1);
  CHECK_THROWS_AS(primitive_decompose(0, 0), InputError);

  for (int m = -12; m <= 12; ++m) {
    for (int n = -12; n <= 12; ++n) {
      if (m == 0 && n == 0) continue;
      const auto d = primitive_decompose(m, n);
      CHECK(d.k > 0);
      CHECK(d.k * d.m0 == m);
      CHECK(d.k * d.n0 == n);
      CHECK(gcd(d.m0, d.n0) == 1);
    }
  }
}

TEST_CASE("perp_primitive") {
  auto a = perp_primitive(2, 3);
  CHECK(a.direction.a() == -3);
  CHECK(a.direction.b() == 2);
  CHECK(a.sign == 1);
  CHECK(pairing(a.direction.index(), LatticeIndex{2, 3}) == 0);

  auto b = perp_primitive(1, 0);
  CHECK(b.direction.index() == DualIndex{0, 1});

  auto c = perp_primitive(0, 1);
  CHECK(c.direction.index() == DualIndex{1, 0});
  CHECK(c.sign == -1);

  CHECK_THROWS_AS(perp_primitive(2, 4), InputError);

  for (int m = -9; m <= 9; ++m) {
    for (int n = -9; n <= 9; ++n) {
      if (gcd(m, n) != 1) continue;
      const auto p = perp_primitive(m, n);
      CHECK(gcd(p.direction.a(), p.direction.b()) == 1);
      CHECK(pairing(p.direction.index(), LatticeIndex{m, n}) == 0);
      CHECK(p.sign * p.direction.a() == -n);
      CHECK(p.sign * p.direction.b() == m);
    }
  }
}

TEST_CASE("complete_basis") {
  auto a = complete_basis(PrimitiveDirection(-3, 2));
  CHECK(a.delta_prime == DualIndex{1, -1});
  CHECK((-3) * a.delta_prime.n - 2 * a.delta_prime.m == 1);

  auto b = complete_basis(PrimitiveDirection(1, 0));
  CHECK(b.delta_prime == DualIndex{0, 1});

  const Lattice lat({1, 0}, {0.3, 1.1});
  for (const auto& delta : enumerate_primitive_directions(8)) {
    const auto c = complete_basis(delta);
    const DualIndex d = delta.index();
    const DualIndex dp = c.delta_prime;
    CHECK(d.m * dp.n - d.n * dp.m == 1);
    CHECK(pairing(d, c.gamma) == 1);
    CHECK(pairing(d, c.gamma_prime) == 0);
    CHECK(pairing(dp, c.gamma) == 0);
    CHECK(pairing(dp, c.gamma_prime) == 1);
    // Same statement with Cartesian vectors.
    CHECK(dot(lat.dual(d), lat.point(c.gamma)) == doctest::Approx(1.0));
    CHECK(std::abs(dot(lat.dual(d), lat.point(c.gamma_prime))) < 1e-12);
  }
}

TEST_CASE("enumerate_primitive_directions") {
  const auto one = enumerate_primitive_directions(1);
  std::set<DualIndex> got;
  for (const auto& d : one) got.insert(d.index());
  CHECK(got == std::set<DualIndex>{{0, 1}, {1, 0}, {1, 1}, {-1, 1}});
  CHECK(std::is_sorted(one.begin(), one.end()));

  const auto two = enumerate_primitive_directions(2);
  CHECK(two.size() == 8);
  std::set<DualIndex> got2;
  for (const auto& d : two) got2.insert(d.index());
  for (DualIndex extra : {DualIndex{2, 1}, DualIndex{1, 2}, DualIndex{-1, 2}, DualIndex{-2, 1}}) {
    CHECK(got2.contains(extra));
  }
  CHECK_THROWS_AS(enumerate_primitive_directions(0), InputError);

  // Every nonzero index in the box is p*delta for exactly one listed delta.
  for (int box = 1; box <= 8; ++box) {
    const auto dirs = enumerate_primitive_directions(box);
    CHECK(std::set<PrimitiveDirection>(dirs.begin(), dirs.end()).size() == dirs.size());
    for (int m = -box; m <= box; ++m) {
      for (int n = -box; n <= box; ++n) {
        if (m == 0 && n == 0) continue;
        int hits = 0;
        for (const auto& d : dirs) {
          for (int p = -box; p <= box; ++p) {
            if (p != 0 && d.multiple(p) == DualIndex{m, n}) ++hits;
          }
        }
        CHECK(hits == 1);
      }
    }
  }
}

TEST_CASE("unit_flux_sublattice") {
  const Lattice lat({1, 0}, {0.3, 1.1});
  CHECK(unit_flux_sublattice(lat, 1) == lat);

  const Lattice l0 = unit_flux_sublattice(lat, 2);
  CHECK(l0.area() == doctest::Approx(2.2));
  const double b0 = kPi / 1.1;
  CHECK(flux_integer(lat, b0).rational == Rational{1, 2});
  CHECK(flux_integer(l0, b0).rational == Rational{1, 1});

  // L0-dual index (m, n) is the L-frequency (m/q, n).
  for (int m = -4; m <= 4; ++m) {
    for (int n = -4; n <= 4; ++n) {
      const Vec2 a = l0.dual(DualIndex{2 * m, n});
      const Vec2 b = lat.dual(DualIndex{m, n});
      CHECK(a.x == doctest::Approx(b.x));
      CHECK(a.y == doctest::Approx(b.y));
    }
  }
  CHECK_THROWS_AS(unit_flux_sublattice(lat, 0), InputError);
}

TEST_CASE("canonical half-plane") {
  CHECK_THROWS_AS(PrimitiveDirection(-1, 0), InputError);
  CHECK_THROWS_AS(PrimitiveDirection(2, 2), InputError);
  CHECK_THROWS_AS(PrimitiveDirection(1, -1), InputError);
  const auto c = canonicalize(1, -2);
  CHECK(c.direction.index() == DualIndex{-1, 2});
  CHECK(c.sign == -1);
}
