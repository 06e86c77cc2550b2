#pragma once

#include <utility>

#include "vnm/observable.hpp"
#include "vnm/phase_space.hpp"

namespace vnm::cm {

enum class GeneratorMode { FlowShift, FiniteDifference };

/// Poisson-bracket generator A_op = dA/dq d/dp - dA/dp d/dq.
///
/// FlowShift observables (Position, ActionFunction) have closed-form flows:
/// exp(s A_op) f = f o Phi_s with Phi_s(q, p) = (q, p + s) for A = q and a
/// rotation of (qbar, pbar) by s dA/dxi for A(xi). General observables are
/// integrated numerically.
class LiouvilleGenerator {
 public:
  explicit LiouvilleGenerator(ClassicalObservable obs);

  const ClassicalObservable& observable() const noexcept { return obs_; }
  GeneratorMode mode() const noexcept { return mode_; }

  /// A_op f as the Arakawa discretization of the bracket {A, f}. A is sampled
  /// one node beyond the grid, f is zero there. The bracket of A with itself
  /// vanishes to roundoff and the grid sum of A_op f telescopes.
  RealField apply(const RealField& f, const Grid1D& qgrid, const Grid1D& pgrid) const;

  /// A_op^2 f = div(D grad f) with D = v v^T, v = (-A_p, A_q). Diagonal terms
  /// use half-node fluxes, cross terms nested centered differences.
  RealField apply_squared(const RealField& f, const Grid1D& qgrid, const Grid1D& pgrid) const;

  /// Explicit-Euler bound h_min^2 / (4 max(A_q^2 + A_p^2)) for apply_squared.
  double stable_step(const Grid1D& qgrid, const Grid1D& pgrid) const;

  /// Phi_s(q, p). For General observables this integrates the characteristic
  /// ODE with RK4 steps no longer than `max_step`.
  std::pair<double, double> flow(double q, double p, double s, double max_step = 1e-2) const;

 private:
  ClassicalObservable obs_;
  GeneratorMode mode_;
};

/// [A, [A, rho]]_PB on the density's grid.
RealField cm_diffusion_rhs(const PhaseSpaceDensity& rho, const ClassicalObservable& obs);

}  // namespace vnm::cm
