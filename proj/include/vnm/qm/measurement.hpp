#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vnm/density_operator.hpp"
#include "vnm/probe.hpp"

namespace vnm::qm {

/// g_mn = exp(-tau (a_m - a_n)^2 / hbar^2) over eigenvalue indices.
class DecoherenceKernel {
 public:
  DecoherenceKernel(Eigen::MatrixXd g, double tau, double hbar);

  const Eigen::MatrixXd& g() const noexcept { return g_; }
  double operator()(std::size_t m, std::size_t n) const { return g_(m, n); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(g_.rows()); }
  double tau() const noexcept { return tau_; }
  double hbar() const noexcept { return hbar_; }

 private:
  Eigen::MatrixXd g_;
  double tau_;
  double hbar_;
};

DecoherenceKernel decoherence_kernel(const SpectralObservable& obs, const CouplingParams& coupling,
                                     double hbar = 1.0);

/// p'(Q) = sum_n p(a_n) N(Q - eps a_n; sigma_Q) sampled on Qgrid.
std::vector<double> pointer_distribution(const DensityOperator& rho, const SpectralObservable& obs,
                                         const ProbeSpec& probe, const CouplingParams& coupling,
                                         const Grid1D& Qgrid);

/// <Q>' = eps Tr(rho A).
double pointer_mean(const DensityOperator& rho, const SpectralObservable& obs,
                    const CouplingParams& coupling);

/// rho' = sum_mn g_mn P_m rho P_n, applied elementwise in the eigenbasis of A.
DensityOperator reduced_state_post(const DensityOperator& rho, const SpectralObservable& obs,
                                   const DecoherenceKernel& kernel);

/// Exact solution exp(-tau/hbar^2 [A,[A,.]]) rho of the Lindblad equation.
DensityOperator lindblad_evolve(const DensityOperator& rho, const Eigen::MatrixXcd& a, double tau,
                                double hbar = 1.0);
Eigen::MatrixXcd lindblad_evolve(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a, double tau,
                                 double hbar = 1.0);

/// -[A, [A, rho]] / hbar^2.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a, double hbar = 1.0);

/// Pinching sum_n P_n rho P_n.
DensityOperator lueders_nonselective(const DensityOperator& rho, const SpectralObservable& obs);

/// Selective state conditioned on the pointer reading Q for a pure Gaussian
/// probe chi(Q) of width sigma_Q:
///   rho'|Q = V rho V^dagger / Tr(V rho V^dagger),  V = sum_n chi(Q - eps a_n) P_n.
/// NegligibleProbability when p'(Q) < 1e-12.
DensityOperator conditional_state(const DensityOperator& rho, const SpectralObservable& obs,
                                  const ProbeSpec& probe, const CouplingParams& coupling, double Q);

/// Reported scalar (eps / hbar) sigma_P sqrt(var x) for a position-grid state.
double disturbance_measure(const DensityOperator& rho, const CouplingParams& coupling, double hbar = 1.0);

}  // namespace vnm::qm
