#include "vnm/grid.hpp"

#include <algorithm>
#include <cmath>

#include "vnm/error.hpp"

namespace vnm {

Grid1D::Grid1D(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::InvalidArgument, "grid bounds must be finite");
  require(hi > lo, ErrorCode::InvalidArgument, "grid requires hi > lo");
  require(n >= 2, ErrorCode::InvalidArgument, "grid requires at least 2 nodes");
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

double Grid1D::half_width() const noexcept { return std::min(-lo_, hi_); }

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n) {
  require(n >= 2, ErrorCode::InvalidArgument, "periodic grid requires at least 2 nodes");
}

std::vector<double> trapezoid_weights(const Grid1D& grid) {
  std::vector<double> w(grid.size(), grid.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double trapezoid(const Grid1D& grid, std::span<const double> values) {
  require(values.size() == grid.size(), ErrorCode::ShapeMismatch, "trapezoid: sample count differs from grid");
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * grid.spacing();
}

Moments moments(const Grid1D& grid, std::span<const double> density) {
  require(density.size() == grid.size(), ErrorCode::ShapeMismatch, "moments: sample count differs from grid");
  const auto w = trapezoid_weights(grid);
  Moments m;
  double first = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    m.mass += w[i] * density[i];
    first += w[i] * density[i] * grid.node(i);
  }
  require(m.mass != 0.0, ErrorCode::InvalidState, "moments: zero mass");
  m.mean = first / m.mass;
  double second = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double d = grid.node(i) - m.mean;
    second += w[i] * density[i] * d * d;
  }
  m.variance = second / m.mass;
  return m;
}

double wrap_angle(double theta) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

}  // namespace vnm
