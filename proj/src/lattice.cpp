#include "magrigid/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace magrigid {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

PrimitiveDirection::PrimitiveDirection(std::int64_t a, std::int64_t b) : a_(a), b_(b) {
  if (gcd(a, b) != 1) {
    std::ostringstream os;
    os << "direction (" << a << "," << b << ") is not primitive";
    throw InputError(os.str());
  }
  if (!(b > 0 || (b == 0 && a > 0))) {
    std::ostringstream os;
    os << "direction (" << a << "," << b << ") is not in the canonical half-plane";
    throw InputError(os.str());
  }
}

SignedDirection canonicalize(std::int64_t a, std::int64_t b) {
  if (b > 0 || (b == 0 && a > 0)) return {PrimitiveDirection(a, b), 1};
  if (a == 0 && b == 0) throw InputError("zero vector has no direction");
  return {PrimitiveDirection(-a, -b), -1};
}

std::pair<Vec2, Vec2> dual_basis(Vec2 e1, Vec2 e2) {
  const double det = cross(e1, e2);
  if (!(std::abs(det) >= 1e-12 * norm(e1) * norm(e2)) || norm(e1) == 0.0 || norm(e2) == 0.0) {
    throw InputError("degenerate lattice basis");
  }
  return {Vec2{e2.y / det, -e2.x / det}, Vec2{-e1.y / det, e1.x / det}};
}

Lattice::Lattice(Vec2 e1, Vec2 e2) : e1_(e1), e2_(e2), det_(cross(e1, e2)) {
  std::tie(e1s_, e2s_) = dual_basis(e1, e2);
}

Vec2 Lattice::point(LatticeIndex d) const {
  return static_cast<double>(d.m) * e1_ + static_cast<double>(d.n) * e2_;
}

Vec2 Lattice::point(double u, double v) const { return u * e1_ + v * e2_; }

Vec2 Lattice::dual(DualIndex beta) const {
  return static_cast<double>(beta.m) * e1s_ + static_cast<double>(beta.n) * e2s_;
}

std::array<double, 2> Lattice::coords(Vec2 x) const { return {dot(x, e1s_), dot(x, e2s_)}; }

std::optional<Rational> detect_rational(double x, std::int64_t cap, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  std::int64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h = ai * h1 + h2;
    const std::int64_t k = ai * k1 + k2;
    if (k > cap) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      return Rational{h, k};
    }
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const double frac = r - a;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

FluxQuantization flux_integer(const Lattice& lattice, double b0) {
  if (b0 == 0.0 || !std::isfinite(b0)) throw InputError("flux requires nonzero finite b0");
  FluxQuantization out;
  out.value = b0 * lattice.det() / (2.0 * std::numbers::pi);
  out.rational = detect_rational(out.value);
  return out;
}

double b0_for_unit_flux(const Lattice& lattice, int b0_sign) {
  const double magnitude = 2.0 * std::numbers::pi / lattice.area();
  return b0_sign < 0 ? -magnitude : magnitude;
}

GenericityResult is_generic(const Lattice& lattice, double radius) {
  if (!(radius > 0.0)) throw InputError("genericity radius must be positive");
  struct Entry {
    double len2;
    LatticeIndex d;
  };
  const auto mmax = static_cast<std::int64_t>(std::floor(radius * norm(lattice.e1s()))) + 1;
  const auto nmax = static_cast<std::int64_t>(std::floor(radius * norm(lattice.e2s()))) + 1;
  const double r2 = radius * radius;
  std::vector<Entry> entries;
  // Only one of each +-d pair is kept.
  for (std::int64_t n = 0; n <= nmax; ++n) {
    for (std::int64_t m = -mmax; m <= mmax; ++m) {
      if (n == 0 && m <= 0) continue;
      const Vec2 p = lattice.point(LatticeIndex{m, n});
      const double len2 = dot(p, p);
      if (len2 <= r2) entries.push_back({len2, {m, n}});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.len2 != b.len2) return a.len2 < b.len2;
    if (a.d.n != b.d.n) return a.d.n < b.d.n;
    return a.d.m < b.d.m;
  });
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    const double a = entries[i].len2;
    const double b = entries[i + 1].len2;
    if (b - a <= 1e-10 * b) {
      return {false, std::make_pair(entries[i].d, entries[i + 1].d)};
    }
  }
  return {};
}

PrimitiveDecomposition primitive_decompose(std::int64_t m, std::int64_t n) {
  if (m == 0 && n == 0) throw InputError("(0,0) has no primitive decomposition");
  const std::int64_t k = gcd(m, n);
  return {k, m / k, n / k};
}

SignedDirection perp_primitive(std::int64_t m0, std::int64_t n0) {
  if (gcd(m0, n0) != 1) throw InputError("perp_primitive requires a primitive pair");
  return canonicalize(-n0, m0);
}

namespace {

// x, y with a*x + b*y = gcd(a, b) for a, b >= 0.
void extended_euclid(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  x = x0;
  y = y0;
}

}  // namespace

BasisCompletion complete_basis(const PrimitiveDirection& delta) {
  const std::int64_t a = delta.a();
  const std::int64_t b = delta.b();
  std::int64_t x = 0, y = 0;
  extended_euclid(a < 0 ? -a : a, b < 0 ? -b : b, x, y);
  if (a < 0) x = -x;
  if (b < 0) y = -y;
  // a*x + b*y = 1, so delta' = (-y, x) gives det [delta; delta'] = +1.
  const DualIndex dp{-y, x};
  const std::int64_t c = dp.m;
  const std::int64_t d = dp.n;
  return {dp, LatticeIndex{d, -c}, LatticeIndex{-b, a}};
}

std::vector<PrimitiveDirection> enumerate_primitive_directions(std::int64_t max_sup_norm) {
  if (max_sup_norm < 1) throw InputError("max_sup_norm must be >= 1");
  std::vector<PrimitiveDirection> out;
  for (std::int64_t a = -max_sup_norm; a <= max_sup_norm; ++a) {
    for (std::int64_t b = 0; b <= max_sup_norm; ++b) {
      if (!(b > 0 || a > 0)) continue;
      if (gcd(a, b) != 1) continue;
      out.emplace_back(a, b);
    }
  }
  return out;
}

Lattice unit_flux_sublattice(const Lattice& lattice, std::int64_t q) {
  if (q < 1) throw InputError("sublattice index q must be >= 1");
  return Lattice(static_cast<double>(q) * lattice.e1(), lattice.e2());
}

}  // namespace magrigid
