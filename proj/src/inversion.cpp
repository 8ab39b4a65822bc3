#include "magrigid/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "magrigid/spectral.hpp"

namespace magrigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNewtonTolerance = 1e-12;
constexpr double kCompositionTolerance = 1e-9;

Complex unit_phase(double t) { return std::polar(1.0, kTwoPi * (t - std::nearbyint(t))); }

std::string describe(const PrimitiveDirection& d) {
  std::ostringstream os;
  os << "(" << d.a() << "," << d.b() << ")";
  return os.str();
}

DirectionalProfile hermitian_profile(const std::vector<Complex>& positive, std::int64_t K) {
  std::map<std::int64_t, Complex> out;
  for (std::int64_t p = 1; p <= K; ++p) {
    const Complex c = positive[static_cast<std::size_t>(p)];
    out[p] = c;
    out[-p] = std::conj(c);
  }
  return DirectionalProfile(std::move(out));
}

}  // namespace

std::vector<Complex> density_coefficients(std::span<const Complex> stored, std::int64_t l) {
  if (l != 1 && l != -1) throw InputError("density coefficients need l = +-1");
  std::vector<Complex> out(stored.begin(), stored.end());
  if (l == -1) {
    for (auto& c : out) c = std::conj(c);
  }
  return out;
}

std::vector<double> synthesize_sprime(std::span<const Complex> density, std::int64_t M) {
  const auto K = static_cast<std::int64_t>(density.size());
  if (M < 4 * K || M < 1) {
    throw InputError("synthesis resolution M = " + std::to_string(M) + " is below 4K = " +
                     std::to_string(4 * K));
  }
  std::vector<Complex> roots(static_cast<std::size_t>(M));
  for (std::int64_t q = 0; q < M; ++q) {
    roots[static_cast<std::size_t>(q)] = unit_phase(static_cast<double>(q) / static_cast<double>(M));
  }
  std::vector<double> out(static_cast<std::size_t>(M));
  double worst = INFINITY;
  for (std::int64_t j = 0; j < M; ++j) {
    double value = 1.0;
    for (std::int64_t k = 1; k <= K; ++k) {
      value += 2.0 * std::real(density[static_cast<std::size_t>(k - 1)] *
                               roots[static_cast<std::size_t>((k * j) % M)]);
    }
    out[static_cast<std::size_t>(j)] = value;
    worst = std::min(worst, value);
  }
  if (!(worst > 0.0)) {
    std::ostringstream os;
    os << "synthesized s'(y) reaches " << worst
       << "; y(s) = s + A1(s)/b0 is not monotone (hypothesis fails or K is too small)";
    throw MonotonicityError(os.str(), worst);
  }
  return out;
}

void MonotoneMap::eval(double y, double& s, double& ds) const {
  const Complex z = unit_phase(y);
  Complex zk = z;
  double acc = 0.0;
  double dacc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Complex term = coeffs_[i] * zk;
    dacc += 2.0 * std::real(term);
    acc += 2.0 * std::real(term / Complex(0.0, kTwoPi * static_cast<double>(i + 1)));
    zk *= z;
  }
  s = y + offset_ + acc;
  ds = 1.0 + dacc;
}

double MonotoneMap::s_at(double y) const {
  double s = 0.0, ds = 0.0;
  eval(y, s, ds);
  return s;
}

double MonotoneMap::sprime_at(double y) const {
  double s = 0.0, ds = 0.0;
  eval(y, s, ds);
  return ds;
}

double MonotoneMap::y_at(double s) const {
  const double guess = s - offset_;
  const double pad = bound_ + 1e-9;
  return solve_increasing([&](double y) { return s_at(y) - s; },
                          [&](double y) { return sprime_at(y); }, guess - pad, guess + pad,
                          guess, kNewtonTolerance);
}

std::vector<double> MonotoneMap::solve_grid() const {
  const std::size_t m = sprime_.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = y_at(static_cast<double>(i) / static_cast<double>(m));
  return out;
}

double MonotoneMap::composition_residual() const {
  const std::size_t m = y_of_s_.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    worst = std::max(worst, std::abs(s_at(y_of_s_[i]) - static_cast<double>(i) / static_cast<double>(m)));
  }
  return worst;
}

MonotoneMap build_monotone_map(std::span<const double> sprime_samples) {
  const std::size_t m = sprime_samples.size();
  if (m < 4) throw InputError("monotone map needs at least 4 samples");
  const double lowest = *std::min_element(sprime_samples.begin(), sprime_samples.end());
  if (!(lowest > 0.0)) {
    throw MonotonicityError("s'(y) has a non-positive sample " + std::to_string(lowest), lowest);
  }
  const std::vector<Complex> c = dft_coefficients(sprime_samples, (m - 1) / 2);
  if (std::abs(c[0] - 1.0) > 1e-9) {
    throw InputError("s'(y) must have unit mean so that s(y + 1) = s(y) + 1");
  }
  MonotoneMap map;
  map.coeffs_.assign(c.begin() + 1, c.end());
  for (std::size_t k = 0; k < map.coeffs_.size(); ++k) {
    map.bound_ += std::abs(map.coeffs_[k]) / (std::numbers::pi * static_cast<double>(k + 1));
  }
  map.sprime_.assign(sprime_samples.begin(), sprime_samples.end());

  // With offset C the inverse is y_C(s) = y_0(s - C), so the mean of
  // y_C(s) - s is mean(y_0(s) - s) - C.
  const std::vector<double> y0 = map.solve_grid();
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += y0[i] - static_cast<double>(i) / static_cast<double>(m);
  map.offset_ = mean / static_cast<double>(m);
  map.y_of_s_ = map.solve_grid();

  map.s_of_y_.resize(m);
  for (std::size_t j = 0; j < m; ++j) map.s_of_y_[j] = map.s_at(static_cast<double>(j) / static_cast<double>(m));

  const double residual = map.composition_residual();
  if (!(residual <= kCompositionTolerance)) {
    throw std::logic_error("monotone inversion failed: composition residual " +
                           std::to_string(residual));
  }
  return map;
}

DirectionalProfile recover_Bdelta(const MonotoneMap& map, double b0, std::int64_t K) {
  const std::int64_t m = map.resolution();
  if (2 * K >= m) throw InputError("recovery needs M > 2K");
  std::vector<double> a1(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(m);
    a1[static_cast<std::size_t>(i)] = b0 * (map.y_of_s()[static_cast<std::size_t>(i)] - s);
  }
  std::vector<Complex> c = dft_coefficients(a1, static_cast<std::size_t>(K));
  for (std::int64_t p = 1; p <= K; ++p) {
    c[static_cast<std::size_t>(p)] *= Complex(0.0, kTwoPi * static_cast<double>(p));
  }
  return hermitian_profile(c, K);
}

DirectionalProfile recover_Vdelta(std::span<const Complex> density, const MonotoneMap& map) {
  const auto K = static_cast<std::int64_t>(density.size());
  const std::int64_t m = map.resolution();
  if (2 * K >= m) throw InputError("recovery needs M > 2K");
  std::vector<double> v(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const double y = map.y_of_s()[static_cast<std::size_t>(i)];
    const Complex z = unit_phase(y);
    Complex zk = z;
    double g = 0.0;
    for (std::int64_t k = 1; k <= K; ++k) {
      g += 2.0 * std::real(density[static_cast<std::size_t>(k - 1)] * zk);
      zk *= z;
    }
    v[static_cast<std::size_t>(i)] = g / map.sprime_at(y);
  }
  return hermitian_profile(dft_coefficients(v, static_cast<std::size_t>(K)), K);
}

FourierField2D assemble_field(const std::map<PrimitiveDirection, DirectionalProfile>& profiles,
                              const Lattice& lattice, double mean, std::int64_t box) {
  std::map<DualIndex, Complex> coeffs;
  for (const auto& [delta, profile] : profiles) {
    for (const auto& [p, c] : profile.coeffs()) {
      if (p == 0) continue;
      const DualIndex beta = delta.multiple(p);
      if (std::max(std::abs(beta.m), std::abs(beta.n)) > box) continue;
      if (!coeffs.emplace(beta, c).second) {
        throw std::logic_error("dual index assigned twice during assembly");
      }
    }
  }
  return FourierField2D(lattice, mean, std::move(coeffs));
}

CoefficientErrors coefficient_errors(const FourierField2D& reconstructed,
                                     const FourierField2D& reference) {
  std::set<DualIndex> support;
  for (const auto& [beta, c] : reconstructed.coeffs()) support.insert(beta);
  for (const auto& [beta, c] : reference.coeffs()) support.insert(beta);
  double diff2 = 0.0, ref2 = 0.0, diff_max = 0.0, ref_max = 0.0;
  for (const DualIndex beta : support) {
    const double d = std::abs(reconstructed.coeff(beta) - reference.coeff(beta));
    const double r = std::abs(reference.coeff(beta));
    diff2 += d * d;
    ref2 += r * r;
    diff_max = std::max(diff_max, d);
    ref_max = std::max(ref_max, r);
  }
  CoefficientErrors out;
  out.rel_l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  out.rel_linf = ref_max > 0.0 ? diff_max / ref_max : diff_max;
  return out;
}

ReconstructionReport reconstruct(const InvariantSet& set, const InverseParams& params) {
  const std::int64_t K = params.K > 0 ? std::min(params.K, set.K) : set.K;
  if (params.M < 4 * K) throw InputError("inversion resolution M must be at least 4K");
  std::int64_t box = 0;
  for (const auto& dir : set.directions) {
    box = std::max({box, std::abs(dir.direction.a()), std::abs(dir.direction.b())});
  }

  const std::size_t count = set.directions.size();
  std::vector<DirectionalProfile> b_profiles(count), v_profiles(count);
  std::vector<DirectionReport> reports;
  reports.reserve(count);
  for (const auto& dir : set.directions) reports.push_back({dir.direction, 0.0, 0.0, {}, {}});
  std::vector<std::exception_ptr> failures(count);

  parallel_for(count, [&](std::size_t i) {
    const DirectionInvariants& dir = set.directions[i];
    try {
      const auto f = density_coefficients(std::span(dir.F).first(static_cast<std::size_t>(K)), set.l);
      const auto g = density_coefficients(std::span(dir.G).first(static_cast<std::size_t>(K)), set.l);
      const std::vector<double> sprime = synthesize_sprime(f, params.M);
      const MonotoneMap map = build_monotone_map(sprime);
      b_profiles[i] = recover_Bdelta(map, set.b0, K);
      v_profiles[i] = recover_Vdelta(g, map);
      reports[i].min_sprime = *std::min_element(sprime.begin(), sprime.end());
      reports[i].composition_residual = map.composition_residual();
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });

  for (std::size_t i = 0; i < count; ++i) {
    if (!failures[i]) continue;
    const std::string where = "direction " + describe(set.directions[i].direction) + ": ";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const MonotonicityError& e) {
      throw MonotonicityError(where + e.what(), e.min_value());
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(where + e.what());
    }
  }

  std::map<PrimitiveDirection, DirectionalProfile> bmap, vmap;
  for (std::size_t i = 0; i < count; ++i) {
    bmap.emplace(set.directions[i].direction, std::move(b_profiles[i]));
    vmap.emplace(set.directions[i].direction, std::move(v_profiles[i]));
  }
  ReconstructionReport report{assemble_field(bmap, set.lattice, set.b0, box),
                              assemble_field(vmap, set.lattice, 0.0, box),
                              std::move(reports),
                              std::nullopt,
                              std::nullopt,
                              0.0,
                              K,
                              params.M,
                              box};
  report.b_margin = hypothesis_margin(report.B, default_margin_grid(report.B));
  if (!(report.b_margin > 0.0)) {
    std::ostringstream os;
    os << "reconstructed B has hypothesis margin " << report.b_margin
       << "; the invariants are not those of a field with |B - b0| < |b0|";
    throw HypothesisError(os.str(), report.b_margin);
  }
  return report;
}

namespace {

double line_error(const FourierField2D& a, const FourierField2D& b, const PrimitiveDirection& delta) {
  std::set<std::int64_t> ps;
  const DirectionalProfile pa = project_direction(a, delta);
  const DirectionalProfile pb = project_direction(b, delta);
  for (const auto& [p, c] : pa.coeffs()) ps.insert(p);
  for (const auto& [p, c] : pb.coeffs()) ps.insert(p);
  double worst = 0.0;
  for (const std::int64_t p : ps) {
    worst = std::max(worst, std::abs(a.coeff(delta.multiple(p)) - b.coeff(delta.multiple(p))));
  }
  return worst;
}

}  // namespace

void attach_errors(ReconstructionReport& report, const FourierField2D& B_true,
                   const FourierField2D& V_true) {
  report.b_errors = coefficient_errors(report.B, B_true);
  report.v_errors = coefficient_errors(report.V, V_true);
  for (auto& dir : report.directions) {
    dir.b_error = line_error(report.B, B_true, dir.direction);
    dir.v_error = line_error(report.V, V_true, dir.direction);
  }
}

ReconstructionReport roundtrip(const FourierField2D& B, const FourierField2D& V,
                               const RoundtripParams& params) {
  const InvariantSet set = compute_invariant_set(B, V, params.forward);
  ReconstructionReport report = reconstruct(set, params.inverse);
  attach_errors(report, B, V);
  return report;
}

}  // namespace magrigid
