#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerics.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double normal_pdf(double x, double s) {
  return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
}

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * k);
  return s * h / 3.0;
}

/// I0(x) = (1/pi) int_0^pi exp(x cos t) dt, scaled by exp(-|x|). The integrand
/// is smooth and periodic, so the trapezoid rule converges geometrically.
inline double i0_scaled_quadrature(double x) {
  const int n = 4000;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = std::numbers::pi * (k + 0.5) / n;
    s += std::exp(x * std::cos(t) - std::fabs(x));
  }
  return s / n;
}

}  // namespace oracle
