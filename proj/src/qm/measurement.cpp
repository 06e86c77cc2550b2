#include "vnm/qm/measurement.hpp"

#include <cmath>
#include <numbers>

#include "vnm/error.hpp"

namespace vnm::qm {

DecoherenceKernel::DecoherenceKernel(Eigen::MatrixXd g, double tau, double hbar)
    : g_(std::move(g)), tau_(tau), hbar_(hbar) {
  require(g_.rows() == g_.cols(), ErrorCode::ShapeMismatch, "decoherence kernel must be square");
}

DecoherenceKernel decoherence_kernel(const SpectralObservable& obs, const CouplingParams& coupling, double hbar) {
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be positive");
  const auto& a = obs.eigenvalues();
  const auto n = static_cast<Eigen::Index>(a.size());
  const double rate = coupling.tau() / (hbar * hbar);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    g(m, m) = 1.0;
    for (Eigen::Index k = m + 1; k < n; ++k) {
      const double d = a[static_cast<std::size_t>(m)] - a[static_cast<std::size_t>(k)];
      g(m, k) = g(k, m) = std::exp(-rate * d * d);
    }
  }
  return DecoherenceKernel(std::move(g), coupling.tau(), hbar);
}

std::vector<double> pointer_distribution(const DensityOperator& rho, const SpectralObservable& obs,
                                         const ProbeSpec& probe, const CouplingParams& coupling, const Grid1D& Qgrid) {
  probe.validate();
  const auto w = born_weights(rho, obs);
  const auto& a = obs.eigenvalues();
  std::vector<double> out(Qgrid.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double Q = Qgrid.node(k);
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += w[n] * gaussian_pdf(Q - coupling.epsilon() * a[n], probe.sigma_Q);
    out[k] = s;
  }
  return out;
}

double pointer_mean(const DensityOperator& rho, const SpectralObservable& obs, const CouplingParams& coupling) {
  const auto w = born_weights(rho, obs);
  double s = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) s += w[n] * obs.eigenvalues()[n];
  return coupling.epsilon() * s;
}

DensityOperator reduced_state_post(const DensityOperator& rho, const SpectralObservable& obs,
                                   const DecoherenceKernel& kernel) {
  require(kernel.size() == obs.num_eigenvalues(), ErrorCode::KernelMismatch,
          "kernel size differs from the observable's eigenvalue count");
  require(rho.dim() == obs.dim(), ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  if (kernel.tau() == 0.0) return rho;
  Eigen::MatrixXcd r = obs.to_eigenbasis(rho.matrix());
  const auto& block = obs.block_of();
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) *= kernel(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
  return DensityOperator(rho.basis(), hermitian_part(obs.from_eigenbasis(r)));
}

Eigen::MatrixXcd lindblad_evolve(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a, double tau, double hbar) {
  require(tau >= 0.0, ErrorCode::InvalidArgument, "tau must be non-negative");
  const auto obs = SpectralObservable::from_matrix(a);
  require(static_cast<std::size_t>(rho.rows()) == obs.dim(), ErrorCode::DimensionMismatch,
          "state and observable dimensions differ");
  if (tau == 0.0) return rho;
  const auto kernel = decoherence_kernel(obs, CouplingParams::from_tau(1.0, tau), hbar);
  Eigen::MatrixXcd r = obs.to_eigenbasis(rho);
  const auto& block = obs.block_of();
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) *= kernel(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
  return hermitian_part(obs.from_eigenbasis(r));
}

DensityOperator lindblad_evolve(const DensityOperator& rho, const Eigen::MatrixXcd& a, double tau, double hbar) {
  return DensityOperator(rho.basis(), lindblad_evolve(rho.matrix(), a, tau, hbar));
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a, double hbar) {
  require(a.rows() == a.cols() && rho.rows() == a.rows() && rho.cols() == a.cols(), ErrorCode::DimensionMismatch,
          "state and observable dimensions differ");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale, ErrorCode::NonHermitianObservable,
          "observable matrix is not Hermitian");
  const Eigen::MatrixXcd c = a * rho - rho * a;
  return -(a * c - c * a) / (hbar * hbar);
}

DensityOperator lueders_nonselective(const DensityOperator& rho, const SpectralObservable& obs) {
  Eigen::MatrixXcd r = obs.to_eigenbasis(rho.matrix());
  const auto& block = obs.block_of();
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      if (block[static_cast<std::size_t>(i)] != block[static_cast<std::size_t>(j)]) r(i, j) = 0.0;
  return DensityOperator(rho.basis(), hermitian_part(obs.from_eigenbasis(r)));
}

DensityOperator conditional_state(const DensityOperator& rho, const SpectralObservable& obs, const ProbeSpec& probe,
                                  const CouplingParams& coupling, double Q) {
  probe.validate();
  require(rho.dim() == obs.dim(), ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  // chi(Q)^2 is the Gaussian position density of the probe.
  const double s = probe.sigma_Q;
  const double norm = std::pow(2.0 * std::numbers::pi * s * s, -0.25);
  const auto& a = obs.eigenvalues();
  std::vector<double> chi(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = Q - coupling.epsilon() * a[n];
    chi[n] = norm * std::exp(-d * d / (4.0 * s * s));
  }
  Eigen::MatrixXcd r = obs.to_eigenbasis(rho.matrix());
  const auto& block = obs.block_of();
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      r(i, j) *= chi[block[static_cast<std::size_t>(i)]] * chi[block[static_cast<std::size_t>(j)]];
  const double p = r.trace().real();
  require(p >= 1e-12, ErrorCode::NegligibleProbability,
          "pointer reading has probability density " + std::to_string(p));
  return DensityOperator(rho.basis(), hermitian_part(obs.from_eigenbasis(r / p)));
}

double disturbance_measure(const DensityOperator& rho, const CouplingParams& coupling, double hbar) {
  const auto& g = rho.grid();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    m1 += w * g.node(i);
    m2 += w * g.node(i) * g.node(i);
  }
  const double var = std::max(0.0, m2 - m1 * m1);
  return coupling.epsilon() / hbar * coupling.sigma_P() * std::sqrt(var);
}

}  // namespace vnm::qm
