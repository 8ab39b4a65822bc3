#include "magrigid/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace magrigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_upper_half(DualIndex beta) { return beta.n > 0 || (beta.n == 0 && beta.m > 0); }

// exp(2 pi i t), with t reduced to [-1/2, 1/2] first.
Complex unit_phase(double t) { return std::polar(1.0, kTwoPi * (t - std::nearbyint(t))); }

std::string describe(DualIndex beta) {
  std::ostringstream os;
  os << "(" << beta.m << "," << beta.n << ")";
  return os.str();
}

}  // namespace

FourierField2D::FourierField2D(Lattice lattice, double mean) : lattice_(lattice), mean_(mean) {}

FourierField2D::FourierField2D(Lattice lattice, double mean, std::map<DualIndex, Complex> coeffs)
    : lattice_(lattice), mean_(mean), coeffs_(std::move(coeffs)) {
  if (coeffs_.contains(DualIndex{0, 0})) {
    throw InputError("the (0,0) coefficient belongs in the mean, not the coefficient map");
  }
  for (const auto& [beta, c] : coeffs_) {
    const auto it = coeffs_.find(-beta);
    const Complex partner = it == coeffs_.end() ? Complex{} : it->second;
    const double scale = std::max(std::abs(c), 1e-300);
    if (std::abs(partner - std::conj(c)) > 1e-12 * scale) {
      throw InputError("coefficients at " + describe(beta) + " and " + describe(-beta) +
                       " are not complex conjugates");
    }
  }
}

void FourierField2D::set(DualIndex beta, Complex c) {
  if (beta == DualIndex{0, 0}) throw InputError("use the mean for the (0,0) coefficient");
  if (c == Complex{}) {
    coeffs_.erase(beta);
    coeffs_.erase(-beta);
    return;
  }
  coeffs_[beta] = c;
  coeffs_[-beta] = std::conj(c);
}

Complex FourierField2D::coeff(DualIndex beta) const {
  if (beta == DualIndex{0, 0}) return mean_;
  const auto it = coeffs_.find(beta);
  return it == coeffs_.end() ? Complex{} : it->second;
}

std::int64_t FourierField2D::max_index() const {
  std::int64_t w = 0;
  for (const auto& [beta, c] : coeffs_) w = std::max({w, std::abs(beta.m), std::abs(beta.n)});
  return w;
}

Complex eval_field_complex(const FourierField2D& field, Vec2 x) {
  const auto [u, v] = field.lattice().coords(x);
  Complex sum = field.mean();
  for (const auto& [beta, c] : field.coeffs()) {
    sum += c * unit_phase(static_cast<double>(beta.m) * u + static_cast<double>(beta.n) * v);
  }
  return sum;
}

double eval_field(const FourierField2D& field, Vec2 x) {
  const auto [u, v] = field.lattice().coords(x);
  double sum = field.mean();
  for (const auto& [beta, c] : field.coeffs()) {
    if (!in_upper_half(beta)) continue;
    sum += 2.0 * std::real(c * unit_phase(static_cast<double>(beta.m) * u +
                                          static_cast<double>(beta.n) * v));
  }
  return sum;
}

MagneticPotential build_potential(const FourierField2D& B) {
  MagneticPotential pot{B.lattice(), B.mean(), {}};
  for (const auto& [beta, b] : B.coeffs()) {
    const Vec2 cart = B.lattice().dual(beta);
    const Complex denom = Complex(0.0, kTwoPi) * dot(cart, cart);
    pot.a1[beta] = CVec2{b * cart.y / denom, -b * cart.x / denom};
  }
  return pot;
}

Vec2 eval_A0(double b0, Vec2 x) { return {0.5 * b0 * x.y, -0.5 * b0 * x.x}; }

Vec2 eval_A(const MagneticPotential& pot, Vec2 x) {
  Vec2 a = eval_A0(pot.b0, x);
  const auto [u, v] = pot.lattice.coords(x);
  for (const auto& [beta, c] : pot.a1) {
    const Complex ph =
        unit_phase(static_cast<double>(beta.m) * u + static_cast<double>(beta.n) * v);
    a.x += std::real(c.x * ph);
    a.y += std::real(c.y * ph);
  }
  return a;
}

std::map<DualIndex, Complex> spectral_curl(const MagneticPotential& pot) {
  std::map<DualIndex, Complex> out;
  for (const auto& [beta, c] : pot.a1) {
    const Vec2 k = pot.lattice.dual(beta);
    out[beta] = Complex(0.0, kTwoPi) * (k.y * c.x - k.x * c.y);
  }
  return out;
}

std::map<DualIndex, Complex> spectral_divergence(const MagneticPotential& pot) {
  std::map<DualIndex, Complex> out;
  for (const auto& [beta, c] : pot.a1) {
    const Vec2 k = pot.lattice.dual(beta);
    out[beta] = Complex(0.0, kTwoPi) * (k.x * c.x + k.y * c.y);
  }
  return out;
}

DirectionalProfile::DirectionalProfile(std::map<std::int64_t, Complex> coeffs)
    : coeffs_(std::move(coeffs)) {
  for (const auto& [p, c] : coeffs_) {
    const auto it = coeffs_.find(-p);
    const Complex partner = it == coeffs_.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-12 * std::max(std::abs(c), 1e-300)) {
      throw InputError("profile coefficients at p = " + std::to_string(p) +
                       " and -p are not complex conjugates");
    }
  }
}

Complex DirectionalProfile::coeff(std::int64_t p) const {
  const auto it = coeffs_.find(p);
  return it == coeffs_.end() ? Complex{} : it->second;
}

std::int64_t DirectionalProfile::bandwidth() const {
  std::int64_t w = 0;
  for (const auto& [p, c] : coeffs_) w = std::max(w, std::abs(p));
  return w;
}

Complex DirectionalProfile::eval_complex(double s) const {
  Complex sum{};
  for (const auto& [p, c] : coeffs_) sum += c * unit_phase(static_cast<double>(p) * s);
  return sum;
}

double DirectionalProfile::eval(double s) const {
  double sum = std::real(coeff(0));
  for (const auto& [p, c] : coeffs_) {
    if (p > 0) sum += 2.0 * std::real(c * unit_phase(static_cast<double>(p) * s));
  }
  return sum;
}

DirectionalProfile DirectionalProfile::derivative() const {
  std::map<std::int64_t, Complex> out;
  for (const auto& [p, c] : coeffs_) {
    if (p != 0) out[p] = Complex(0.0, kTwoPi * static_cast<double>(p)) * c;
  }
  return DirectionalProfile(std::move(out));
}

DirectionalProfile project_direction(const FourierField2D& field, const PrimitiveDirection& delta) {
  std::map<std::int64_t, Complex> out;
  for (const auto& [beta, c] : field.coeffs()) {
    // beta is a multiple of delta iff the integer cross product vanishes.
    if (beta.m * delta.b() - beta.n * delta.a() != 0) continue;
    const std::int64_t p = delta.a() != 0 ? beta.m / delta.a() : beta.n / delta.b();
    out[p] = c;
  }
  return DirectionalProfile(std::move(out));
}

DirectionalProfile profile_antiderivative(const DirectionalProfile& profile) {
  if (!profile.mean_zero()) {
    throw InputError("antiderivative of a profile with a p = 0 term is not periodic");
  }
  std::map<std::int64_t, Complex> out;
  for (const auto& [p, c] : profile.coeffs()) {
    out[p] = c / Complex(0.0, kTwoPi * static_cast<double>(p));
  }
  return DirectionalProfile(std::move(out));
}

double max_deviation(const FourierField2D& field, std::int64_t grid) {
  if (grid < 1) throw InputError("grid must be positive");
  std::vector<Complex> roots(static_cast<std::size_t>(grid));
  for (std::int64_t q = 0; q < grid; ++q) {
    roots[static_cast<std::size_t>(q)] =
        std::polar(1.0, kTwoPi * static_cast<double>(q) / static_cast<double>(grid));
  }
  std::vector<std::pair<DualIndex, Complex>> half;
  for (const auto& [beta, c] : field.coeffs()) {
    if (in_upper_half(beta)) half.emplace_back(beta, c);
  }
  const auto wrap = [grid](std::int64_t q) {
    const std::int64_t r = q % grid;
    return static_cast<std::size_t>(r < 0 ? r + grid : r);
  };
  double worst = 0.0;
  for (std::int64_t i = 0; i < grid; ++i) {
    for (std::int64_t j = 0; j < grid; ++j) {
      double dev = 0.0;
      for (const auto& [beta, c] : half) {
        dev += 2.0 * std::real(c * roots[wrap(beta.m * i + beta.n * j)]);
      }
      worst = std::max(worst, std::abs(dev));
    }
  }
  return worst;
}

std::int64_t default_margin_grid(const FourierField2D& B) {
  return std::max<std::int64_t>(64, 8 * B.max_index());
}

double hypothesis_margin(const FourierField2D& B, std::int64_t grid) {
  if (grid < 4 * B.max_index() || grid < 1) {
    throw InputError("margin grid " + std::to_string(grid) + " undersamples a field of index " +
                     std::to_string(B.max_index()));
  }
  return std::abs(B.mean()) - max_deviation(B, grid);
}

double line_average(const FourierField2D& field, Vec2 x, LatticeIndex d) {
  const auto [u, v] = field.lattice().coords(x);
  double sum = field.mean();
  for (const auto& [beta, c] : field.coeffs()) {
    if (pairing(beta, d) != 0 || !in_upper_half(beta)) continue;
    sum += 2.0 * std::real(c * unit_phase(static_cast<double>(beta.m) * u +
                                          static_cast<double>(beta.n) * v));
  }
  return sum;
}

namespace {

FourierField2D random_shape(std::uint64_t seed, const Lattice& lattice, std::int64_t max_index,
                            double mean) {
  if (max_index < 0) throw InputError("max_index must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FourierField2D field(lattice, mean);
  for (std::int64_t n = 0; n <= max_index; ++n) {
    for (std::int64_t m = -max_index; m <= max_index; ++m) {
      if (!in_upper_half({m, n})) continue;
      const double sigma = 1.0 / std::sqrt(1.0 + static_cast<double>(m * m + n * n));
      const double re = normal(rng);
      const double im = normal(rng);
      field.set({m, n}, sigma * Complex(re, im));
    }
  }
  return field;
}

FourierField2D scaled(const FourierField2D& field, double factor) {
  std::map<DualIndex, Complex> coeffs;
  for (const auto& [beta, c] : field.coeffs()) coeffs[beta] = factor * c;
  return FourierField2D(field.lattice(), field.mean(), std::move(coeffs));
}

}  // namespace

FourierField2D random_admissible_field(std::uint64_t seed, const Lattice& lattice,
                                       std::int64_t max_index, double target_margin) {
  if (!(target_margin > 0.0 && target_margin < 1.0)) {
    throw InputError("target_margin must lie in (0, 1)");
  }
  const double b0 = b0_for_unit_flux(lattice, +1);
  FourierField2D shape = random_shape(seed, lattice, max_index, b0);
  if (shape.coeffs().empty()) return shape;
  const std::int64_t grid = default_margin_grid(shape);
  const double allowed = (1.0 - target_margin) * std::abs(b0);
  double factor = allowed / max_deviation(shape, grid);
  FourierField2D field = scaled(shape, factor);
  // Rounding can leave the margin a few ulps short of the target.
  while (hypothesis_margin(field, grid) < target_margin * std::abs(b0)) {
    factor *= 1.0 - 1e-12;
    field = scaled(shape, factor);
  }
  return field;
}

FourierField2D random_potential_field(std::uint64_t seed, const Lattice& lattice,
                                      std::int64_t max_index, double amplitude) {
  if (!(amplitude >= 0.0)) throw InputError("amplitude must be nonnegative");
  FourierField2D shape = random_shape(seed ^ 0x5851f42d4c957f2dULL, lattice, max_index, 0.0);
  if (shape.coeffs().empty() || amplitude == 0.0) return FourierField2D(lattice, 0.0);
  return scaled(shape, amplitude / max_deviation(shape, default_margin_grid(shape)));
}

}  // namespace magrigid
