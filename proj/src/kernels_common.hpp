#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "vnm/error.hpp"
#include "vnm/kernels.hpp"

namespace vnm::kernels::detail {

/// Smallest power of two holding a row and its zero padding without wraparound.
inline std::size_t pad_length(std::size_t n) noexcept {
  std::size_t l = 1;
  while (l < 2 * n) l <<= 1;
  return l;
}

/// Angular wavenumber of DFT bin m on a padded row of length l and spacing h.
inline double wavenumber(std::size_t m, std::size_t l, double h) noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(l) * h);
}

inline std::size_t max_lag(std::size_t k, std::size_t n) noexcept { return k < n - 1 - k ? k : n - 1 - k; }

inline void check_wigner_args(const WignerArgs& a) {
  require(a.rho != nullptr && a.rho->rows() == a.rho->cols(), ErrorCode::ShapeMismatch, "wigner: square matrix required");
  require(a.a_nodes.empty() || static_cast<Eigen::Index>(a.a_nodes.size()) == a.rho->rows(), ErrorCode::ShapeMismatch,
          "wigner: observable samples differ from the grid");
}

inline void check_rates(const RealField& rows, std::span<const double> rate) {
  require(static_cast<Eigen::Index>(rate.size()) == rows.rows(), ErrorCode::ShapeMismatch, "one rate per row required");
}

}  // namespace vnm::kernels::detail
