#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vnm/grid.hpp"

namespace vnm {

/// Row-major real field; row index runs over the first coordinate.
using RealField = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Point-evaluable density rho(q, p).
using PhaseSpaceFunction = std::function<double(double, double)>;

enum class Interpolation { Bilinear, Cubic };

enum class Axis { Q, P };

/// Non-negative density sampled on a (q, p) node grid.
class PhaseSpaceDensity {
 public:
  PhaseSpaceDensity(Grid1D qgrid, Grid1D pgrid, RealField values);

  const Grid1D& qgrid() const noexcept { return qgrid_; }
  const Grid1D& pgrid() const noexcept { return pgrid_; }
  const RealField& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

  double mass() const;
  // Mass carried by nodes in the outer `band` fraction of either axis.
  double leakage(double band = 0.05) const;

 private:
  Grid1D qgrid_;
  Grid1D pgrid_;
  RealField values_;
};

struct DensityCheck {
  double min_value = 0.0;
  double mass = 0.0;
  double leakage = 0.0;
  bool ok = false;
};

struct DensityTolerances {
  double negativity = 1e-12;
  double mass = 1e-8;
  double leakage_budget = 1e-6;
};

DensityCheck check_density(const PhaseSpaceDensity& rho, const DensityTolerances& tol = {});
void validate(const PhaseSpaceDensity& rho, const DensityTolerances& tol = {});

/// One bivariate Gaussian term of a mixture.
struct GaussianComponent {
  double weight = 1.0;
  double mean_q = 0.0;
  double mean_p = 0.0;
  double sigma_q = 1.0;
  double sigma_p = 1.0;
  double correlation = 0.0;  // in (-1, 1)
};

/// Closed-form density of a normalized Gaussian mixture (weights renormalized).
PhaseSpaceFunction gaussian_mixture_function(std::vector<GaussianComponent> components);

PhaseSpaceDensity tabulate(const Grid1D& qgrid, const Grid1D& pgrid, const PhaseSpaceFunction& f);

/// Zero-centered product Gaussian, normalized on the grid.
/// Throws GridTooNarrow unless +-6 sigma fits inside each axis.
PhaseSpaceDensity build_gaussian_phase_density(const Grid1D& qgrid, const Grid1D& pgrid,
                                               double sigma_q, double sigma_p);

PhaseSpaceDensity build_gaussian_mixture(const Grid1D& qgrid, const Grid1D& pgrid,
                                         std::span<const GaussianComponent> components);

/// Equal-weight Dirac deltas in q at the given positions, times a zero-centered
/// Gaussian in p. Each delta is a normalized Gaussian of width two q spacings.
PhaseSpaceDensity build_delta_density(const Grid1D& qgrid, const Grid1D& pgrid,
                                      std::span<const double> q_positions, double sigma_p);

double delta_width(const Grid1D& qgrid) noexcept;

/// Returns a copy rescaled to unit trapezoid mass.
PhaseSpaceDensity normalized(const PhaseSpaceDensity& rho);

std::vector<double> marginal(const PhaseSpaceDensity& rho, Axis axis);

/// Integral of `observable_values * rho` over the grid. ShapeMismatch when the
/// sampled observable does not live on the density's grid.
double expectation(const PhaseSpaceDensity& rho, const RealField& observable_values);

/// Point evaluation of the gridded density; zero outside the grid rectangle.
/// The cubic path uses 4x4 Lagrange stencils and clamps negative undershoot to 0.
PhaseSpaceFunction interpolator(const PhaseSpaceDensity& rho, Interpolation method = Interpolation::Cubic);

/// Convex combination p1 a + p2 b. Both densities must share their grids.
PhaseSpaceDensity mix(double p1, const PhaseSpaceDensity& a, double p2, const PhaseSpaceDensity& b);

double l1_distance(const PhaseSpaceDensity& a, const PhaseSpaceDensity& b);

}  // namespace vnm
