#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vnm/grid.hpp"

namespace vnm {

struct PositionBasis {
  Grid1D grid;
};

struct NumberBasis {
  std::size_t dim;
};

using Basis = std::variant<PositionBasis, NumberBasis>;

std::size_t basis_dimension(const Basis& basis) noexcept;

/// Density matrix in a declared basis. On a position grid the entries are the
/// discrete matrix rho_ij = h <x_i|rho|x_j>, so the trace is a plain sum.
class DensityOperator {
 public:
  DensityOperator(Basis basis, Eigen::MatrixXcd matrix);

  const Basis& basis() const noexcept { return basis_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  bool on_position_grid() const noexcept { return std::holds_alternative<PositionBasis>(basis_); }
  const Grid1D& grid() const;

 private:
  Basis basis_;
  Eigen::MatrixXcd matrix_;
};

struct OperatorCheck {
  double hermiticity = 0.0;  // max |rho - rho^dagger|
  double trace_error = 0.0;  // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  bool ok = false;
};

struct OperatorTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-10;
  double negativity = 1e-10;
};

OperatorCheck check_operator(const Eigen::MatrixXcd& rho, const OperatorTolerances& tol = {});
OperatorCheck check_operator(const DensityOperator& rho, const OperatorTolerances& tol = {});
void validate(const DensityOperator& rho, const OperatorTolerances& tol = {});

/// Tr(rho M). ShapeMismatch for incompatible sizes.
std::complex<double> trace_with(const DensityOperator& rho, const Eigen::MatrixXcd& op);

/// (1/2) || a - b ||_1 for Hermitian arguments.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double max_abs_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m);

/// |psi><psi| / <psi|psi>.
DensityOperator pure_state(Basis basis, const Eigen::VectorXcd& psi);

/// Discrete wavefunction sqrt(h) psi(x_i) from continuum samples psi(x_i).
Eigen::VectorXcd discretize_wavefunction(const Grid1D& grid, const Eigen::VectorXcd& continuum_samples);

/// Gaussian state with position width sigma_x and momentum width sigma_p
/// (sigma_x sigma_p >= hbar / 2; equality is the pure coherent packet):
///   <x|rho|x'> ~ exp(-(x + x' - 2 mean)^2 / (8 sigma_x^2) - (x - x')^2 sigma_p^2 / (2 hbar^2)).
/// Its Wigner function is the product Gaussian with the same widths.
DensityOperator gaussian_density_operator(const Grid1D& grid, double mean_x, double sigma_x,
                                          double sigma_p, double hbar = 1.0);

/// Coherent superposition alpha psi1 + beta psi2 of two continuum wavefunctions
/// sampled on a position grid.
struct PureSuperposition {
  std::complex<double> alpha;
  std::complex<double> beta;
  Eigen::VectorXcd psi1;
  Eigen::VectorXcd psi2;

  /// Continuum samples of the superposition, normalized to 1 under the trapezoid rule.
  Eigen::VectorXcd wavefunction(const Grid1D& grid) const;
  DensityOperator density(const Grid1D& grid) const;
};

/// Weights and two components of a convex combination.
template <class State>
struct MixtureSpec {
  double p1 = 0.5;
  double p2 = 0.5;
  State first;
  State second;
};

DensityOperator mix(double p1, const DensityOperator& a, double p2, const DensityOperator& b);

/// Observable with discrete spectral resolution A = sum_n a_n P_n.
///
/// Stored as an orthonormal eigenbasis (columns) with a block index per column;
/// degenerate eigenvalues share one block. A diagonal observable keeps only the
/// block index per canonical basis vector, so position grids never materialize
/// n x n projectors.
class SpectralObservable {
 public:
  /// Eigendecomposition of a Hermitian matrix. NonHermitianObservable otherwise.
  static SpectralObservable from_matrix(const Eigen::MatrixXcd& a, double degeneracy_tol = 1e-9);
  /// Observable diagonal in the canonical basis, e.g. A(x_i) on a position grid.
  static SpectralObservable diagonal(std::span<const double> values, double degeneracy_tol = 1e-12);

  std::size_t dim() const noexcept { return block_of_.size(); }
  std::size_t num_eigenvalues() const noexcept { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  /// Eigenvalue index of each basis column.
  const std::vector<std::size_t>& block_of() const noexcept { return block_of_; }
  bool is_diagonal() const noexcept { return !basis_.has_value(); }
  /// Eigenbasis columns (identity for diagonal observables).
  Eigen::MatrixXcd basis() const;

  Eigen::MatrixXcd projector(std::size_t n) const;
  std::vector<Eigen::MatrixXcd> projectors() const;
  Eigen::MatrixXcd matrix() const;
  double min_gap() const;

  /// rho expressed in the eigenbasis: U^dagger rho U.
  Eigen::MatrixXcd to_eigenbasis(const Eigen::MatrixXcd& rho) const;
  Eigen::MatrixXcd from_eigenbasis(const Eigen::MatrixXcd& rho_eig) const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<std::size_t> block_of_;
  std::optional<Eigen::MatrixXcd> basis_;
};

/// Born weights p(a_n) = Tr(rho P_n). DimensionMismatch for incompatible sizes.
std::vector<double> born_weights(const DensityOperator& rho, const SpectralObservable& obs);

}  // namespace vnm
