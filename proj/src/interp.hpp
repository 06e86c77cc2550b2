#pragma once

// Stencil helpers shared by the resampling code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace vnm::detail {

/// Four-point Lagrange weights at fractional position t on nodes 0..3.
inline std::array<double, 4> lagrange4(double t) noexcept {
  const double a = t, b = t - 1.0, c = t - 2.0, d = t - 3.0;
  return {-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0};
}

struct Stencil {
  std::ptrdiff_t start = 0;
  std::array<double, 4> w{};
  int width = 0;  // 2 for linear, 4 for cubic
};

/// Stencil on a uniform axis of n nodes for coordinate u = (x - lo) / h in [0, n-1].
inline Stencil axis_stencil(double u, std::size_t n, bool cubic) noexcept {
  Stencil s;
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  if (cubic && n >= 4) {
    s.start = std::clamp<std::ptrdiff_t>(i - 1, 0, last - 3);
    s.w = lagrange4(u - static_cast<double>(s.start));
    s.width = 4;
  } else {
    i = std::clamp<std::ptrdiff_t>(i, 0, last - 1);
    const double t = u - static_cast<double>(i);
    s.start = i;
    s.w = {1.0 - t, t, 0.0, 0.0};
    s.width = 2;
  }
  return s;
}

/// Periodic stencil for coordinate u = theta / dtheta; indices are wrapped by the caller.
inline Stencil periodic_stencil(double u, bool cubic) noexcept {
  Stencil s;
  const auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  if (cubic) {
    s.start = i - 1;
    s.w = lagrange4(u - static_cast<double>(s.start));
    s.width = 4;
  } else {
    const double t = u - static_cast<double>(i);
    s.start = i;
    s.w = {1.0 - t, t, 0.0, 0.0};
    s.width = 2;
  }
  return s;
}

inline std::size_t wrap_index(std::ptrdiff_t i, std::size_t n) noexcept {
  const auto m = static_cast<std::ptrdiff_t>(n);
  auto r = i % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

}  // namespace vnm::detail
