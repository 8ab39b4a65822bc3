// Small numerical kernels shared by the forward and inverse paths.
#ifndef MAGRIGID_SPECTRAL_HPP_
#define MAGRIGID_SPECTRAL_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace magrigid {

/// c_p = (1/M) sum_j f_j exp(-2 pi i p j / M) for p = 0..max_harmonic, from M
/// uniform samples of a 1-periodic function. Exact for trig polynomials of
/// degree < M/2.
std::vector<std::complex<double>> dft_coefficients(std::span<const double> samples,
                                                   std::size_t max_harmonic);

/// Root of an increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi).
/// Newton steps from x0; any step that leaves the bracket, or more than
/// max_newton steps, falls back to bisection. Converged when the step is below tol.
template <typename F, typename DF>
double solve_increasing(const F& f, const DF& df, double lo, double hi, double x0, double tol,
                        int max_newton = 50) {
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int iter = 0; iter < max_newton + 200; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x;
    else hi = x;
    double next = 0.5 * (lo + hi);
    if (iter < max_newton) {
      const double slope = df(x);
      if (slope > 0.0) {
        const double newton = x - fx / slope;
        if (std::abs(newton - x) <= tol) return std::clamp(newton, lo, hi);
        if (newton > lo && newton < hi) next = newton;
      }
    }
    const double step = next - x;
    x = next;
    if (std::abs(step) <= tol || hi - lo <= tol) return x;
  }
  return x;
}

/// Runs fn(i) for i in [0, count) on the available hardware threads. Each
/// index is visited exactly once; callers write results by index.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace magrigid

#endif  // MAGRIGID_SPECTRAL_HPP_
