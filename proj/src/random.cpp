#include "vnm/random.hpp"

#include <cmath>
#include <numbers>

namespace vnm {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(seed ^ splitmix64(stream ^ 0x6a09e667f3bcc909ull))) {}

std::uint64_t CounterRng::next_u64() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXcd random_state_vector(std::size_t dim, CounterRng& rng) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (auto& z : v) {
    const double re = rng.normal();
    z = {re, rng.normal()};
  }
  return v / v.norm();
}

Eigen::MatrixXcd random_density_matrix(std::size_t dim, std::size_t rank, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  double total = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double w = rng.uniform();
    const Eigen::VectorXcd psi = random_state_vector(dim, rng);
    rho += w * psi * psi.adjoint();
    total += w;
  }
  rho /= total;
  return 0.5 * (rho + rho.adjoint());
}

Eigen::MatrixXcd random_unitary(std::size_t dim, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = rng.normal();
      z(i, j) = {re, rng.normal()};
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Eigen::MatrixXcd random_hermitian(std::span<const double> eigenvalues, CounterRng& rng) {
  const Eigen::MatrixXcd u = random_unitary(eigenvalues.size(), rng);
  Eigen::VectorXd d(static_cast<Eigen::Index>(eigenvalues.size()));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) d(static_cast<Eigen::Index>(i)) = eigenvalues[i];
  const Eigen::MatrixXcd a = u * d.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  return 0.5 * (a + a.adjoint());
}

std::vector<GaussianComponent> random_gaussian_mixture(std::size_t count, double center_range,
                                                       double min_sigma, double max_sigma,
                                                       CounterRng& rng) {
  std::vector<GaussianComponent> out(count);
  for (auto& c : out) {
    c.weight = 0.2 + 0.8 * rng.uniform();
    c.mean_q = center_range * (2.0 * rng.uniform() - 1.0);
    c.mean_p = center_range * (2.0 * rng.uniform() - 1.0);
    c.sigma_q = min_sigma + (max_sigma - min_sigma) * rng.uniform();
    c.sigma_p = min_sigma + (max_sigma - min_sigma) * rng.uniform();
    c.correlation = 0.5 * (2.0 * rng.uniform() - 1.0);
  }
  return out;
}

}  // namespace vnm
