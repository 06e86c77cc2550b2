#include "vnm/special.hpp"

#include <cmath>
#include <numbers>

namespace vnm {

namespace {

// Below this the power series is summed directly; above it the asymptotic
// expansion is accurate to roundoff.
constexpr double kSwitchover = 30.0;

double series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= y / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) for large x.
double asymptotic_scaled(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i0(double x) {
  const double ax = std::fabs(x);
  if (ax < kSwitchover) return series(ax);
  return std::exp(ax) * asymptotic_scaled(ax);
}

double bessel_i0_scaled(double x) {
  const double ax = std::fabs(x);
  if (ax < kSwitchover) return std::exp(-ax) * series(ax);
  return asymptotic_scaled(ax);
}

}  // namespace vnm
