#include "vnm/density_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vnm/error.hpp"

namespace vnm {

std::size_t basis_dimension(const Basis& basis) noexcept {
  return std::visit(
      [](const auto& b) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, PositionBasis>) return b.grid.size();
        else return b.dim;
      },
      basis);
}

DensityOperator::DensityOperator(Basis basis, Eigen::MatrixXcd matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols(), ErrorCode::ShapeMismatch, "density matrix must be square");
  require(static_cast<std::size_t>(matrix_.rows()) == basis_dimension(basis_), ErrorCode::DimensionMismatch,
          "density matrix size differs from its basis dimension");
}

const Grid1D& DensityOperator::grid() const {
  const auto* pb = std::get_if<PositionBasis>(&basis_);
  require(pb != nullptr, ErrorCode::BasisMismatch, "state is not on a position grid");
  return pb->grid;
}

OperatorCheck check_operator(const Eigen::MatrixXcd& rho, const OperatorTolerances& tol) {
  OperatorCheck c;
  c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  c.ok = c.hermiticity <= tol.hermiticity && c.trace_error <= tol.trace && c.min_eigenvalue >= -tol.negativity;
  return c;
}

OperatorCheck check_operator(const DensityOperator& rho, const OperatorTolerances& tol) {
  return check_operator(rho.matrix(), tol);
}

void validate(const DensityOperator& rho, const OperatorTolerances& tol) {
  const auto c = check_operator(rho, tol);
  require(c.ok, ErrorCode::InvalidState,
          "density operator fails invariants: hermiticity " + std::to_string(c.hermiticity) + ", trace error " +
              std::to_string(c.trace_error) + ", min eigenvalue " + std::to_string(c.min_eigenvalue));
}

std::complex<double> trace_with(const DensityOperator& rho, const Eigen::MatrixXcd& op) {
  require(op.rows() == op.cols() && static_cast<std::size_t>(op.rows()) == rho.dim(), ErrorCode::ShapeMismatch,
          "operator size differs from the state");
  return (rho.matrix().transpose().cwiseProduct(op)).sum();
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::ShapeMismatch, "trace distance: size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double max_abs_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::ShapeMismatch, "size mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

DensityOperator pure_state(Basis basis, const Eigen::VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  require(n2 > 0.0, ErrorCode::InvalidArgument, "zero state vector");
  return DensityOperator(std::move(basis), psi * psi.adjoint() / n2);
}

Eigen::VectorXcd discretize_wavefunction(const Grid1D& grid, const Eigen::VectorXcd& continuum_samples) {
  require(static_cast<std::size_t>(continuum_samples.size()) == grid.size(), ErrorCode::ShapeMismatch,
          "wavefunction samples differ from grid size");
  return continuum_samples * std::sqrt(grid.spacing());
}

DensityOperator gaussian_density_operator(const Grid1D& grid, double mean_x, double sigma_x, double sigma_p,
                                          double hbar) {
  require(sigma_x > 0.0 && sigma_p > 0.0 && hbar > 0.0, ErrorCode::InvalidArgument, "widths must be positive");
  require(sigma_x * sigma_p >= 0.5 * hbar * (1.0 - 1e-12), ErrorCode::InvalidArgument,
          "sigma_x sigma_p below hbar / 2 is not a valid state");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd rho(n, n);
  const double a = 1.0 / (8.0 * sigma_x * sigma_x);
  const double b = sigma_p * sigma_p / (2.0 * hbar * hbar);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.node(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double y = grid.node(static_cast<std::size_t>(j));
      const double s = x + y - 2.0 * mean_x;
      const double d = x - y;
      rho(i, j) = std::exp(-a * s * s - b * d * d);
    }
  }
  rho /= rho.trace().real();
  return DensityOperator(PositionBasis{grid}, rho);
}

Eigen::VectorXcd PureSuperposition::wavefunction(const Grid1D& grid) const {
  require(static_cast<std::size_t>(psi1.size()) == grid.size() && static_cast<std::size_t>(psi2.size()) == grid.size(),
          ErrorCode::ShapeMismatch, "component wavefunctions differ from grid size");
  Eigen::VectorXcd psi = alpha * psi1 + beta * psi2;
  std::vector<double> dens(grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(psi(static_cast<Eigen::Index>(i)));
  const double n2 = trapezoid(grid, dens);
  require(n2 > 0.0, ErrorCode::InvalidArgument, "superposition vanishes");
  return psi / std::sqrt(n2);
}

DensityOperator PureSuperposition::density(const Grid1D& grid) const {
  return pure_state(PositionBasis{grid}, discretize_wavefunction(grid, wavefunction(grid)));
}

DensityOperator mix(double p1, const DensityOperator& a, double p2, const DensityOperator& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "mixture components differ in dimension");
  require(p1 >= 0.0 && p2 >= 0.0 && std::fabs(p1 + p2 - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "mixture weights must be non-negative and sum to 1");
  return DensityOperator(a.basis(), p1 * a.matrix() + p2 * b.matrix());
}

namespace {

// Groups sorted values into blocks whose spread stays below tol * max(1, |value|).
std::vector<std::size_t> group_sorted(const std::vector<double>& sorted, double tol, std::vector<double>& reps) {
  std::vector<std::size_t> block(sorted.size());
  std::size_t start = 0;
  reps.clear();
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k == 0 || sorted[k] - sorted[start] > tol * std::max(1.0, std::fabs(sorted[start]))) {
      start = k;
      reps.push_back(sorted[k]);
    }
    block[k] = reps.size() - 1;
  }
  // Representative value: mean of the members.
  std::vector<double> sum(reps.size(), 0.0);
  std::vector<std::size_t> count(reps.size(), 0);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    sum[block[k]] += sorted[k];
    ++count[block[k]];
  }
  for (std::size_t b = 0; b < reps.size(); ++b) reps[b] = sum[b] / static_cast<double>(count[b]);
  return block;
}

}  // namespace

SpectralObservable SpectralObservable::from_matrix(const Eigen::MatrixXcd& a, double degeneracy_tol) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::ShapeMismatch, "observable must be a square matrix");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale, ErrorCode::NonHermitianObservable,
          "observable matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(a));
  std::vector<double> evals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  SpectralObservable o;
  o.block_of_ = group_sorted(evals, degeneracy_tol, o.eigenvalues_);
  o.basis_ = es.eigenvectors();
  return o;
}

SpectralObservable SpectralObservable::diagonal(std::span<const double> values, double degeneracy_tol) {
  require(!values.empty(), ErrorCode::InvalidArgument, "observable needs at least one value");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> sorted(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = values[order[k]];
  SpectralObservable o;
  const auto block_sorted = group_sorted(sorted, degeneracy_tol, o.eigenvalues_);
  o.block_of_.resize(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) o.block_of_[order[k]] = block_sorted[k];
  return o;
}

Eigen::MatrixXcd SpectralObservable::basis() const {
  if (basis_) return *basis_;
  const auto n = static_cast<Eigen::Index>(dim());
  return Eigen::MatrixXcd::Identity(n, n);
}

Eigen::MatrixXcd SpectralObservable::projector(std::size_t n) const {
  require(n < eigenvalues_.size(), ErrorCode::InvalidArgument, "projector index out of range");
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (block_of_[static_cast<std::size_t>(k)] != n) continue;
    if (basis_) p += basis_->col(k) * basis_->col(k).adjoint();
    else p(k, k) = 1.0;
  }
  return p;
}

std::vector<Eigen::MatrixXcd> SpectralObservable::projectors() const {
  std::vector<Eigen::MatrixXcd> ps;
  for (std::size_t n = 0; n < eigenvalues_.size(); ++n) ps.push_back(projector(n));
  return ps;
}

Eigen::MatrixXcd SpectralObservable::matrix() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::VectorXcd diag(d);
  for (Eigen::Index k = 0; k < d; ++k) diag(k) = eigenvalues_[block_of_[static_cast<std::size_t>(k)]];
  if (!basis_) return diag.asDiagonal();
  return *basis_ * diag.asDiagonal() * basis_->adjoint();
}

double SpectralObservable::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < eigenvalues_.size(); ++n) g = std::min(g, eigenvalues_[n] - eigenvalues_[n - 1]);
  return g;
}

Eigen::MatrixXcd SpectralObservable::to_eigenbasis(const Eigen::MatrixXcd& rho) const {
  require(static_cast<std::size_t>(rho.rows()) == dim() && rho.rows() == rho.cols(), ErrorCode::DimensionMismatch,
          "state and observable dimensions differ");
  if (!basis_) return rho;
  return basis_->adjoint() * rho * *basis_;
}

Eigen::MatrixXcd SpectralObservable::from_eigenbasis(const Eigen::MatrixXcd& rho_eig) const {
  require(static_cast<std::size_t>(rho_eig.rows()) == dim() && rho_eig.rows() == rho_eig.cols(),
          ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  if (!basis_) return rho_eig;
  return *basis_ * rho_eig * basis_->adjoint();
}

std::vector<double> born_weights(const DensityOperator& rho, const SpectralObservable& obs) {
  require(rho.dim() == obs.dim(), ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  std::vector<double> w(obs.num_eigenvalues(), 0.0);
  const auto& block = obs.block_of();
  if (obs.is_diagonal()) {
    for (std::size_t k = 0; k < block.size(); ++k)
      w[block[k]] += rho.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
    return w;
  }
  const Eigen::MatrixXcd u = obs.basis();
  for (std::size_t k = 0; k < block.size(); ++k) {
    const auto col = u.col(static_cast<Eigen::Index>(k));
    w[block[k]] += (col.adjoint() * rho.matrix() * col)(0, 0).real();
  }
  return w;
}

}  // namespace vnm
