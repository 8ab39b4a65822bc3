// Reference integrators for tests. They share no code with the library.
#ifndef MAGRIGID_TESTS_ORACLES_QUADRATURE_HPP_
#define MAGRIGID_TESTS_ORACLES_QUADRATURE_HPP_

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using CFn = std::function<std::complex<double>(double)>;

namespace detail {

inline std::complex<double> simpson(const CFn& f, double a, double b, std::complex<double> fa,
                                    std::complex<double> fm, std::complex<double> fb, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const std::complex<double> flm = f(lm), frm = f(rm);
  const double h = b - a;
  const auto whole = h / 6.0 * (fa + 4.0 * fm + fb);
  const auto left = h / 12.0 * (fa + 4.0 * flm + fm);
  const auto right = h / 12.0 * (fm + 4.0 * frm + fb);
  const auto diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson over [a, b], started from `panels` equal panels.
inline std::complex<double> adaptive_simpson(const CFn& f, double a, double b, double tol,
                                             int panels = 64) {
  std::complex<double> sum{};
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h, hi = lo + h;
    sum += detail::simpson(f, lo, hi, f(lo), f(0.5 * (lo + hi)), f(hi), tol / panels, 40);
  }
  return sum;
}

/// Composite trapezoid with n panels (endpoints included).
inline std::complex<double> trapezoid(const CFn& f, double a, double b, int n) {
  const double h = (b - a) / n;
  std::complex<double> sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

/// Root of an increasing function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

#endif  // MAGRIGID_TESTS_ORACLES_QUADRATURE_HPP_
