// Inverse problem: recover B and V from the invariants F_k, G_k.
//
// For each direction the F_k are the Fourier coefficients of the density s'(y)
// of the inverse of y(s) = s + A1_delta(s)/b0. Synthesizing s'(y), integrating
// it and inverting the monotone map gives A1_delta and so B_delta; the G_k are
// the coefficients of V_delta(s(y)) s'(y), which then gives V_delta.
#ifndef MAGRIGID_INVERSION_HPP_
#define MAGRIGID_INVERSION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "magrigid/invariants.hpp"

namespace magrigid {

/// Fourier coefficients of s'(y) (and of V_delta(s(y)) s'(y)) from stored
/// invariants: identity for l = 1, complex conjugation for l = -1.
std::vector<Complex> density_coefficients(std::span<const Complex> stored, std::int64_t l);

/// s'(j/M) = 1 + sum_{k=1..K} 2 Re(c_k exp(2 pi i k j / M)), j = 0..M-1.
/// Throws InputError when M < 4K and MonotonicityError when a sample is <= 0.
std::vector<double> synthesize_sprime(std::span<const Complex> density, std::int64_t M);

/// The increasing map s(y) with s(y + 1) = s(y) + 1, held as
/// s(y) = y + offset + sum_k 2 Re(c_k / (2 pi i k) exp(2 pi i k y)), together with
/// its inverse y(s) sampled on the uniform grid s_i = i/M. The offset is chosen
/// so that int_0^1 (y(s) - s) ds = 0.
class MonotoneMap {
 public:
  std::int64_t resolution() const { return static_cast<std::int64_t>(y_of_s_.size()); }
  double offset() const { return offset_; }

  double s_at(double y) const;
  double sprime_at(double y) const;
  /// Solves s(y) = s by safeguarded Newton iteration.
  double y_at(double s) const;

  const std::vector<double>& y_of_s() const { return y_of_s_; }
  const std::vector<double>& s_of_y() const { return s_of_y_; }
  const std::vector<double>& sprime() const { return sprime_; }
  /// max_i |s(y(s_i)) - s_i|.
  double composition_residual() const;

 private:
  friend MonotoneMap build_monotone_map(std::span<const double> sprime_samples);
  void eval(double y, double& s, double& ds) const;
  std::vector<double> solve_grid() const;

  std::vector<Complex> coeffs_;  // c_k, k = 1..
  double offset_ = 0.0;
  double bound_ = 0.0;  // sup |s(y) - y - offset|
  std::vector<double> y_of_s_;
  std::vector<double> s_of_y_;
  std::vector<double> sprime_;
};

/// Samples s'(j/M) must be positive with unit mean (MonotonicityError /
/// InputError otherwise).
MonotoneMap build_monotone_map(std::span<const double> sprime_samples);

/// b_{p delta} for 1 <= |p| <= K from A1_delta(s) = b0 (y(s) - s).
DirectionalProfile recover_Bdelta(const MonotoneMap& map, double b0, std::int64_t K);

/// v_{p delta} for 1 <= |p| <= K, K = density.size(), from
/// V_delta(s) = g(y(s)) y'(s), g(y) = sum_k 2 Re(density_k exp(2 pi i k y)).
DirectionalProfile recover_Vdelta(std::span<const Complex> density, const MonotoneMap& map);

/// Places profile(delta) at p onto beta = p delta for every beta with
/// max(|m|, |n|) <= box. Throws std::logic_error on a doubly assigned index.
FourierField2D assemble_field(const std::map<PrimitiveDirection, DirectionalProfile>& profiles,
                              const Lattice& lattice, double mean, std::int64_t box);

struct CoefficientErrors {
  double rel_l2 = 0.0;
  double rel_linf = 0.0;
};

/// Relative coefficient errors over the union of supports (absolute when the
/// reference is constant).
CoefficientErrors coefficient_errors(const FourierField2D& reconstructed,
                                     const FourierField2D& reference);

struct DirectionReport {
  PrimitiveDirection direction;
  double min_sprime = 0.0;
  double composition_residual = 0.0;
  std::optional<double> b_error;  // max_p |b_rec - b_true|
  std::optional<double> v_error;
};

struct ReconstructionReport {
  FourierField2D B;
  FourierField2D V;
  std::vector<DirectionReport> directions;
  std::optional<CoefficientErrors> b_errors;
  std::optional<CoefficientErrors> v_errors;
  double b_margin = 0.0;
  std::int64_t K = 0;
  std::int64_t M = 0;
  std::int64_t max_primitive_norm = 0;
};

struct InverseParams {
  std::int64_t M = 512;
  std::int64_t K = 0;  // 0 uses every stored harmonic
};

/// Inverts every direction of the set. A failing direction raises
/// MonotonicityError whose message names it. A reconstructed B with
/// hypothesis margin <= 0 raises HypothesisError: truncated data from an
/// inadmissible field can still synthesize a positive s'(y).
ReconstructionReport reconstruct(const InvariantSet& set, const InverseParams& params);

/// Fills the error fields of a report against the true fields.
void attach_errors(ReconstructionReport& report, const FourierField2D& B_true,
                   const FourierField2D& V_true);

struct RoundtripParams {
  ForwardParams forward;
  InverseParams inverse;
};

/// compute_invariant_set -> reconstruct -> attach_errors.
ReconstructionReport roundtrip(const FourierField2D& B, const FourierField2D& V,
                               const RoundtripParams& params);

}  // namespace magrigid

#endif  // MAGRIGID_INVERSION_HPP_
