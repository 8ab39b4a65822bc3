#include "magrigid/spectral.hpp"

#include <cmath>
#include <numbers>

namespace magrigid {

std::vector<std::complex<double>> dft_coefficients(std::span<const double> samples,
                                                   std::size_t max_harmonic) {
  const std::size_t m = samples.size();
  std::vector<std::complex<double>> roots(m);
  for (std::size_t q = 0; q < m; ++q) {
    roots[q] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(q) /
                                   static_cast<double>(m));
  }
  std::vector<std::complex<double>> out(max_harmonic + 1);
  for (std::size_t p = 0; p <= max_harmonic; ++p) {
    std::complex<double> sum{};
    for (std::size_t j = 0; j < m; ++j) sum += samples[j] * roots[(p * j) % m];
    out[p] = sum / static_cast<double>(m);
  }
  return out;
}

}  // namespace magrigid
