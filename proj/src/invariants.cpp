#include "magrigid/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "magrigid/spectral.hpp"

namespace magrigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit_phase(double t) { return std::polar(1.0, kTwoPi * (t - std::nearbyint(t))); }

void check_points(std::int64_t n_points, std::int64_t k, std::int64_t l, std::int64_t bandwidth) {
  const std::int64_t need = 8 * (std::abs(k * l) + bandwidth);
  if (n_points < 64 || n_points < need) {
    std::ostringstream os;
    os << "quadrature with " << n_points << " points undersamples harmonic k = " << k
       << " (need at least max(64, " << need << "))";
    throw InputError(os.str());
  }
}

std::vector<double> y_samples(const DirectionalProfile& a1, double b0, std::int64_t n_points) {
  std::vector<double> y(static_cast<std::size_t>(n_points));
  for (std::int64_t j = 0; j < n_points; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n_points);
    y[static_cast<std::size_t>(j)] = y_map(a1, b0, s);
  }
  return y;
}

std::vector<double> profile_samples(const DirectionalProfile& v, std::int64_t n_points) {
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (std::int64_t j = 0; j < n_points; ++j) {
    out[static_cast<std::size_t>(j)] = v.eval(static_cast<double>(j) / static_cast<double>(n_points));
  }
  return out;
}

// (1/N) sum_j w_j exp(-2 pi i k l y_j); w = empty means w = 1.
Complex trapezoid_harmonic(const std::vector<double>& y, const std::vector<double>& weight,
                           std::int64_t kl) {
  Complex sum{};
  const double freq = static_cast<double>(kl);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const Complex ph = unit_phase(-freq * y[j]);
    sum += weight.empty() ? ph : weight[j] * ph;
  }
  return sum / static_cast<double>(y.size());
}

}  // namespace

double y_map(const DirectionalProfile& a1, double b0, double s) { return s + a1.eval(s) / b0; }

Complex F_coeff(const DirectionalProfile& a1, double b0, std::int64_t l, std::int64_t k,
                std::int64_t n_points) {
  check_points(n_points, k, l, a1.bandwidth());
  return trapezoid_harmonic(y_samples(a1, b0, n_points), {}, k * l);
}

Complex G_coeff(const DirectionalProfile& v, const DirectionalProfile& a1, double b0,
                std::int64_t l, std::int64_t k, std::int64_t n_points) {
  check_points(n_points, k, l, std::max(a1.bandwidth(), v.bandwidth()));
  return trapezoid_harmonic(y_samples(a1, b0, n_points), profile_samples(v, n_points), k * l);
}

double pushforward_functional(const std::map<std::int64_t, Complex>& f, const DirectionalProfile& a1,
                              double b0, std::int64_t l, std::int64_t n_points) {
  Complex total{};
  for (const auto& [k, fk] : f) {
    const auto it = f.find(-k);
    const Complex partner = it == f.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(fk)) > 1e-12 * std::max(std::abs(fk), 1e-300)) {
      throw InputError("pushforward_functional needs a real f (f_{-k} = conj f_k)");
    }
    if (k == 0) {
      total += fk;
    } else if (k > 0) {
      total += fk * F_coeff(a1, b0, l, k, n_points);
    } else {
      total += fk * std::conj(F_coeff(a1, b0, l, -k, n_points));
    }
  }
  return std::real(total);
}

InvariantLocation locate_invariant(LatticeIndex d) {
  const PrimitiveDecomposition dec = primitive_decompose(d.m, d.n);
  const SignedDirection delta = perp_primitive(dec.m0, dec.n0);
  // A0(d) = -pi k l delta_raw under l = b0 det / (2 pi), which makes the
  // exponent of I(d) equal to +2 pi i k l y_raw(delta_raw . x).
  return {delta.direction, -delta.sign * dec.k};
}

namespace {

struct LineIntegrand {
  std::vector<Complex> roots;
  std::vector<std::pair<DualIndex, Complex>> a1_terms;  // d . c_beta for beta . d = 0
  std::vector<std::pair<DualIndex, Complex>> v_terms;   // v_beta for beta . d = 0
};

template <typename Weight>
Complex integrate_over_cell(LatticeIndex d, const MagneticPotential& pot, std::int64_t n2,
                            const LineIntegrand& li, Weight&& weight) {
  if (n2 < 64) throw InputError("two-dimensional quadrature needs at least 64 points per axis");
  const Lattice& lat = pot.lattice;
  const Vec2 dv = lat.point(d);
  const Vec2 a0d = eval_A0(pot.b0, dv);
  const auto wrap = [n2](std::int64_t q) {
    const std::int64_t r = q % n2;
    return static_cast<std::size_t>(r < 0 ? r + n2 : r);
  };
  Complex sum{};
  for (std::int64_t i = 0; i < n2; ++i) {
    for (std::int64_t j = 0; j < n2; ++j) {
      const Vec2 x = lat.point(static_cast<double>(i) / static_cast<double>(n2),
                               static_cast<double>(j) / static_cast<double>(n2));
      // int_0^1 d . A0(x + s d) ds = d . A0(x + d/2) since A0 is linear.
      double phase = -dot(a0d, x) + dot(dv, eval_A0(pot.b0, x + 0.5 * dv));
      for (const auto& [beta, c] : li.a1_terms) {
        phase += std::real(c * li.roots[wrap(beta.m * i + beta.n * j)]);
      }
      sum += weight(i, j, wrap) * std::polar(1.0, phase);
    }
  }
  return lat.area() * sum / static_cast<double>(n2 * n2);
}

LineIntegrand line_integrand(LatticeIndex d, const MagneticPotential& pot, const FourierField2D* V,
                             std::int64_t n2) {
  LineIntegrand li;
  li.roots.resize(static_cast<std::size_t>(std::max<std::int64_t>(n2, 1)));
  for (std::int64_t q = 0; q < n2; ++q) {
    li.roots[static_cast<std::size_t>(q)] = unit_phase(static_cast<double>(q) / static_cast<double>(n2));
  }
  const Vec2 dv = pot.lattice.point(d);
  for (const auto& [beta, c] : pot.a1) {
    if (pairing(beta, d) == 0) li.a1_terms.emplace_back(beta, dv.x * c.x + dv.y * c.y);
  }
  if (V != nullptr) {
    for (const auto& [beta, c] : V->coeffs()) {
      if (pairing(beta, d) == 0) li.v_terms.emplace_back(beta, c);
    }
  }
  return li;
}

}  // namespace

Complex I_full(LatticeIndex d, const MagneticPotential& pot, std::int64_t n2) {
  const LineIntegrand li = line_integrand(d, pot, nullptr, n2);
  return integrate_over_cell(d, pot, n2, li, [](std::int64_t, std::int64_t, auto&&) { return 1.0; });
}

Complex J_full_Vpart(LatticeIndex d, const FourierField2D& V, const MagneticPotential& pot,
                     std::int64_t n2) {
  if (!(V.lattice() == pot.lattice)) throw InputError("V and A live on different lattices");
  const LineIntegrand li = line_integrand(d, pot, &V, n2);
  return integrate_over_cell(d, pot, n2, li, [&](std::int64_t i, std::int64_t j, auto&& wrap) {
    double avg = V.mean();
    for (const auto& [beta, c] : li.v_terms) avg += std::real(c * li.roots[wrap(beta.m * i + beta.n * j)]);
    return avg;
  });
}

const DirectionInvariants* InvariantSet::find(const PrimitiveDirection& delta) const {
  const auto it = std::lower_bound(
      directions.begin(), directions.end(), delta,
      [](const DirectionInvariants& a, const PrimitiveDirection& b) { return a.direction < b; });
  return it != directions.end() && it->direction == delta ? &*it : nullptr;
}

namespace {

Complex lookup(const InvariantSet& set, const PrimitiveDirection& delta, std::int64_t k, bool f) {
  if (k == 0) return f ? Complex{1.0} : Complex{};
  const DirectionInvariants* dir = set.find(delta);
  if (dir == nullptr || std::abs(k) > set.K) {
    throw InputError("invariant outside the computed range");
  }
  const auto& arr = f ? dir->F : dir->G;
  const Complex value = arr[static_cast<std::size_t>(std::abs(k) - 1)];
  return k > 0 ? value : std::conj(value);
}

}  // namespace

Complex InvariantSet::F(const PrimitiveDirection& delta, std::int64_t k) const {
  return lookup(*this, delta, k, true);
}

Complex InvariantSet::G(const PrimitiveDirection& delta, std::int64_t k) const {
  return lookup(*this, delta, k, false);
}

std::int64_t default_quadrature_points(std::int64_t K, std::int64_t l, std::int64_t bandwidth) {
  return std::max({std::int64_t{256}, 16 * K * std::abs(l), 16 * bandwidth});
}

InvariantSet compute_invariant_set(const FourierField2D& B, const FourierField2D& V,
                                   const ForwardParams& params) {
  if (!(B.lattice() == V.lattice())) throw InputError("B and V live on different lattices");
  if (V.mean() != 0.0) throw InputError("the electric potential must have mean zero");
  if (params.K < 1) throw InputError("K must be >= 1");
  const Lattice& lattice = B.lattice();
  const FluxQuantization flux = flux_integer(lattice, B.mean());
  if (!flux.is_unit()) {
    std::ostringstream os;
    os << "flux integer l = " << flux.value << " but the invariants require l = +-1";
    throw InputError(os.str());
  }
  const std::int64_t l = flux.rational->num;
  if (params.require_hypothesis) {
    const double margin = hypothesis_margin(B, default_margin_grid(B));
    if (margin <= 0.0) {
      std::ostringstream os;
      os << "hypothesis |B - b0| < |b0| fails: margin " << margin;
      throw HypothesisError(os.str(), margin);
    }
  }

  InvariantSet set{lattice, B.mean(), l, params.K, 0, lattice.area(), {}};
  const std::int64_t bandwidth = std::max(B.max_index(), V.max_index());
  set.N = params.N > 0 ? params.N : default_quadrature_points(params.K, l, bandwidth);
  check_points(set.N, params.K, l, bandwidth);

  const auto dirs = enumerate_primitive_directions(params.max_primitive_norm);
  std::vector<std::vector<double>> ys;
  std::vector<std::vector<double>> vs;
  ys.reserve(dirs.size());
  vs.reserve(dirs.size());
  for (const auto& delta : dirs) {
    const DirectionalProfile a1 = profile_antiderivative(project_direction(B, delta));
    ys.push_back(y_samples(a1, B.mean(), set.N));
    vs.push_back(profile_samples(project_direction(V, delta), set.N));
    set.directions.push_back({delta, std::vector<Complex>(static_cast<std::size_t>(params.K)),
                              std::vector<Complex>(static_cast<std::size_t>(params.K))});
  }
  const auto K = static_cast<std::size_t>(params.K);
  parallel_for(dirs.size() * K, [&](std::size_t task) {
    const std::size_t di = task / K;
    const std::size_t ki = task % K;
    const auto kl = static_cast<std::int64_t>(ki + 1) * l;
    set.directions[di].F[ki] = trapezoid_harmonic(ys[di], {}, kl);
    set.directions[di].G[ki] = trapezoid_harmonic(ys[di], vs[di], kl);
  });
  return set;
}

}  // namespace magrigid
