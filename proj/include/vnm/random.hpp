#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vnm/phase_space.hpp"

namespace vnm {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based stream: the (seed, stream) pair fixes every draw, so parallel
/// consumers that own distinct streams reproduce bit-identically under any
/// schedule. Normals use Box-Muller on the stream's own uniforms.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1).
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Eigen::VectorXcd random_state_vector(std::size_t dim, CounterRng& rng);
/// Normalized mixture of `rank` random pure states with random weights.
Eigen::MatrixXcd random_density_matrix(std::size_t dim, std::size_t rank, CounterRng& rng);
Eigen::MatrixXcd random_unitary(std::size_t dim, CounterRng& rng);
/// U diag(eigenvalues) U^dagger with a random unitary U.
Eigen::MatrixXcd random_hermitian(std::span<const double> eigenvalues, CounterRng& rng);
/// Random Gaussian mixture components with centers inside +-center_range and
/// widths in [min_sigma, max_sigma].
std::vector<GaussianComponent> random_gaussian_mixture(std::size_t count, double center_range,
                                                       double min_sigma, double max_sigma,
                                                       CounterRng& rng);

}  // namespace vnm
