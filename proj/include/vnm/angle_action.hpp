#pragma once

#include <complex>

#include <Eigen/Core>

#include "vnm/grid.hpp"
#include "vnm/phase_space.hpp"
#include "vnm/probe.hpp"

namespace vnm {

/// Density over action xi >= 0 (rows) and angle theta in [0, 2 pi) (columns).
/// The measure is d(xi) d(theta), equal to d(qbar) d(pbar).
class AngleActionDensity {
 public:
  AngleActionDensity(Grid1D xigrid, PeriodicGrid thetagrid, RealField values);

  const Grid1D& xigrid() const noexcept { return xigrid_; }
  const PeriodicGrid& thetagrid() const noexcept { return thetagrid_; }
  const RealField& values() const noexcept { return values_; }

  double mass() const;
  /// rho(xi) = integral of rho(xi, theta) over theta.
  std::vector<double> xi_marginal() const;
  std::vector<double> theta_marginal() const;

  /// c_m(xi) = (1/2pi) int rho(xi, theta) e^{-i m theta} d theta for m = 0..max_mode.
  /// Negative modes follow from c_{-m} = conj(c_m).
  Eigen::MatrixXcd fourier_coefficients(std::size_t max_mode) const;

 private:
  Grid1D xigrid_;
  PeriodicGrid thetagrid_;
  RealField values_;
};

/// Largest xi for which the whole circle of radius sqrt(2 xi) stays inside the
/// (qbar, pbar) image of the grid rectangle.
double inscribed_xi_max(const Grid1D& qgrid, const Grid1D& pgrid, const UnitsConfig& units);

/// Resamples a (q, p) density onto (xi, theta). Values are carried over
/// unchanged because the canonical map has unit Jacobian.
AngleActionDensity to_angle_action(const PhaseSpaceDensity& rho, const UnitsConfig& units,
                                   const Grid1D& xigrid, std::size_t ntheta,
                                   Interpolation method = Interpolation::Cubic);

/// Same map applied to a point-evaluable density; no interpolation error.
AngleActionDensity to_angle_action(const PhaseSpaceFunction& rho, const UnitsConfig& units,
                                   const Grid1D& xigrid, std::size_t ntheta);

/// Inverse resampling back onto a (q, p) grid. Points beyond the xi grid map to 0.
PhaseSpaceDensity from_angle_action(const AngleActionDensity& rho, const UnitsConfig& units,
                                    const Grid1D& qgrid, const Grid1D& pgrid,
                                    Interpolation method = Interpolation::Cubic);

double l1_distance(const AngleActionDensity& a, const AngleActionDensity& b);

}  // namespace vnm
