#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vnm/grid.hpp"
#include "vnm/probe.hpp"

namespace vnm::scenarios {

enum class Comparison {
  AbsDiff,      // |measured - expected| <= tolerance
  RelDiff,      // |measured - expected| <= tolerance |expected|
  AtMost,       // measured <= tolerance
  GreaterThan,  // measured > tolerance
};

std::string_view to_string(Comparison c) noexcept;

struct Check {
  std::string name;
  std::string description;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::AbsDiff;
  bool pass = false;
  std::string provenance;  // analytic, oracle or closed form
};

/// Check tolerances keyed by check name; an entry replaces the default.
using ToleranceOverrides = std::map<std::string, double>;

Check make_check(std::string name, std::string description, double measured, double expected, double tolerance,
                 Comparison comparison, std::string provenance, const ToleranceOverrides& overrides = {});

/// One sampled curve: values over a named axis.
struct Series {
  std::string name;
  std::string axis;
  std::string axis_units;
  std::string value_units;
  std::vector<double> axis_values;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> column_names;
};

struct ScenarioResult {
  std::string name;
  std::map<std::string, double> inputs;
  std::map<std::string, std::string> notes;
  std::map<std::string, double> scalars;
  std::vector<Series> series;
  std::vector<Check> checks;

  bool passed() const noexcept;
};

struct GridSpec {
  double lo = -4.0;
  double hi = 4.0;
  std::size_t n = 256;

  Grid1D grid() const { return Grid1D(lo, hi, n); }
};

/// Classical two-point state 1/2 [delta(q - q0) + delta(q - q1)] read by an A = q pointer.
struct TwoDeltaParams {
  double q0 = -0.5;
  double q1 = 0.5;
  double epsilon = 1.0;
  ProbeSpec probe{0.05, 0.0};
  GridSpec qgrid{-3.0, 3.0, 1201};
  GridSpec pgrid{-6.0, 6.0, 16};
  GridSpec Qgrid{-4.0, 4.0, 1601};
};

ScenarioResult scenario_two_delta(const TwoDeltaParams& params, const ToleranceOverrides& overrides = {});

/// alpha psi1 + beta psi2 with psi{1,2} Gaussian packets at +-separation/2,
/// against the mixture with weights |alpha|^2, |beta|^2.
struct InterferenceParams {
  std::complex<double> alpha{1.0 / 1.4142135623730951, 0.0};
  std::complex<double> beta{1.0 / 1.4142135623730951, 0.0};
  double separation = 2.0;
  double packet_width = 1.0;
  double epsilon = 1.0;
  ProbeSpec probe{0.1, 0.0};
  GridSpec xgrid{-10.0, 10.0, 256};
  GridSpec Qgrid{-12.0, 12.0, 961};
  double hbar = 1.0;
};

ScenarioResult scenario_interference(const InterferenceParams& params, const ToleranceOverrides& overrides = {});

/// Gaussian operator 2 sinh(hbar / (2 s_p s_q)) exp(-(pbar^2 / s_p^2 + qbar^2 / s_q^2) / 2)
/// in a truncated number basis, measured through A = xi = hbar (n + 1/2).
struct NumberBasisParams {
  double sigma_qbar = 1.2;
  double sigma_pbar = 0.9;
  std::size_t dim = 64;
  double hbar = 1.0;
  double epsilon = 1.0;
  double tau = 50.0;
};

/// TruncationTooSmall when the top quarter of the levels holds more than 1e-10.
ScenarioResult scenario_number_basis(const NumberBasisParams& params, const ToleranceOverrides& overrides = {});

/// Angle average of the product Gaussian in (qbar, pbar) against the I0 profile.
struct GaussianBesselParams {
  double sigma_qbar = 2.0;
  double sigma_pbar = 1.0;
  double xi_max = 10.0;
  std::size_t nxi = 201;
  std::size_t ntheta = 256;
  std::size_t grid_n = 256;  // (q, p) grid for the interpolated route
};

ScenarioResult scenario_gaussian_bessel(const GaussianBesselParams& params, const ToleranceOverrides& overrides = {});

/// Heisenberg-picture ensemble for A = q against the Schroedinger-picture
/// densities. One histogram bin count for every marginal.
struct McPositionParams {
  double sigma_q = 1.0;
  double sigma_p = 1.0;
  double epsilon = 1.0;
  ProbeSpec probe{0.4, 1.0};
  GridSpec grid{-8.0, 8.0, 256};
  std::size_t n = 100000;
  std::uint64_t seed = 20240501;
  std::size_t bins = 16;
  double l1_constant = 5.0;  // pass when L1 <= l1_constant / sqrt(n)
};

ScenarioResult scenario_mc_position(const McPositionParams& params, const ToleranceOverrides& overrides = {});

/// Same comparison for A = A(xi) with polynomial coefficients, in (xi, theta).
struct McActionParams {
  double sigma_q = 0.7;
  double sigma_p = 1.4;
  std::vector<double> coefficients{0.0, 0.6, 0.2};
  double epsilon = 1.0;
  ProbeSpec probe{0.5, 0.8};
  GridSpec grid{-9.0, 9.0, 256};
  std::size_t n = 100000;
  std::uint64_t seed = 20240502;
  std::size_t bins = 16;
  double l1_constant = 5.0;
};

ScenarioResult scenario_mc_action(const McActionParams& params, const ToleranceOverrides& overrides = {});

/// Closed-form strong-coupling profile rho'(xi) per unit angle for the product Gaussian.
double bessel_profile(double xi, double sigma_qbar, double sigma_pbar);

}  // namespace vnm::scenarios
