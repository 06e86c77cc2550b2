#pragma once

#include <functional>
#include <span>

#include "vnm/density_operator.hpp"
#include "vnm/phase_space.hpp"

namespace vnm::qm {

/// W(q, p) on the position-grid nodes (rows) and a momentum grid (columns),
/// normalized so that int W dq dp / (2 pi hbar) = 1.
class WignerFunction {
 public:
  WignerFunction(Grid1D qgrid, Grid1D pgrid, RealField values, double hbar, double max_imag);

  const Grid1D& qgrid() const noexcept { return qgrid_; }
  const Grid1D& pgrid() const noexcept { return pgrid_; }
  const RealField& values() const noexcept { return values_; }
  double hbar() const noexcept { return hbar_; }
  double max_imag_residue() const noexcept { return max_imag_; }

  double normalization() const;
  std::vector<double> p_marginal() const;
  std::vector<double> q_marginal() const;
  /// W / (2 pi hbar) as a phase-space density (may be negative for non-classical states).
  PhaseSpaceDensity as_phase_density() const;

 private:
  Grid1D qgrid_;
  Grid1D pgrid_;
  RealField values_;
  double hbar_;
  double max_imag_;
};

struct WignerEvolutionSpec {
  std::function<double(double)> A;
  double tau = 0.0;

  /// A(q + y/2) - A(q - y/2).
  double delta_A(double q, double y) const { return A(q + 0.5 * y) - A(q - 0.5 * y); }
};

/// BasisMismatch for number-basis input.
WignerFunction wigner_transform(const DensityOperator& rho, const Grid1D& pgrid, double hbar = 1.0);

/// Wigner function of the post-measurement reduced state for an observable A(x).
WignerFunction evolved_wigner(const DensityOperator& rho, const WignerEvolutionSpec& spec,
                              const Grid1D& pgrid, double hbar = 1.0);

/// [ (1/(i hbar)) Delta A(q, i hbar d/dp) ]^2 W, evaluated in the Fourier dual of p.
RealField wigner_pde_rhs(const WignerFunction& w, const WignerEvolutionSpec& spec);

enum class TauDifference { Forward, Centered };

/// Max-norm mismatch between the finite-difference dW/dtau of a uniformly
/// spaced series and the right-hand side. InsufficientSamples below 3 samples.
double wigner_pde_residual(std::span<const WignerFunction> series, std::span<const double> taus,
                           const WignerEvolutionSpec& spec, TauDifference scheme = TauDifference::Centered);

}  // namespace vnm::qm
