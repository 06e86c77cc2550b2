#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace vnm {

/// Uniformly spaced closed interval [lo, hi] with n >= 2 nodes.
class Grid1D {
 public:
  Grid1D(double lo, double hi, std::size_t n);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return (hi_ - lo_) / static_cast<double>(n_ - 1); }
  double node(std::size_t i) const noexcept { return lo_ + spacing() * static_cast<double>(i); }
  std::vector<double> nodes() const;

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }
  // Smallest distance from zero to either end; the usable half-width of a
  // zero-centered grid.
  double half_width() const noexcept;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
};

/// n equally spaced nodes on [0, 2*pi); node n is identified with node 0.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept { return spacing() * static_cast<double>(j); }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

std::vector<double> trapezoid_weights(const Grid1D& grid);
double trapezoid(const Grid1D& grid, std::span<const double> values);

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Mass, mean and central variance of a sampled 1-D density (trapezoid rule).
Moments moments(const Grid1D& grid, std::span<const double> density);

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double theta) noexcept;

}  // namespace vnm
