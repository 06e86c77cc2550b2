#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vnm/kernels.hpp"
#include "vnm/observable.hpp"
#include "vnm/phase_space.hpp"
#include "vnm/probe.hpp"

namespace vnm::mc {

/// Smooth compactly supported pulse g(t) around t1 with unit integral, and its
/// running integral G(t).
class CouplingProfile {
 public:
  /// Standard bump exp(-1 / (1 - u^2)), u = (t - t1) / half_width.
  static CouplingProfile bump(double t1, double half_width);

  double g(double t) const;
  double G(double t) const;
  double t1() const noexcept { return t1_; }
  double half_width() const noexcept { return half_width_; }

 private:
  CouplingProfile(double t1, double half_width, double norm);

  double t1_;
  double half_width_;
  double norm_;
};

struct TrajectoryEnsemble {
  std::vector<kernels::PhasePoint> samples;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return samples.size(); }
};

/// Ensemble in (xi, theta, Qbar, Pbar); the probe pair is used as is.
struct ActionEnsemble {
  std::vector<kernels::ActionPoint> samples;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return samples.size(); }
};

/// Draws (q0, p0) by inverse CDF of the bilinear interpolant of rho_s (q
/// marginal, then p conditional) and (Q0, P0) from the probe Gaussians.
/// Sample i uses counter stream i of `seed`.
TrajectoryEnsemble sample_initial(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe, std::size_t n,
                                  std::uint64_t seed);

/// Final-time maps for A = q: q' = q0, P' = P0, p' = p0 - eps P0, Q' = Q0 + eps q0.
TrajectoryEnsemble flow_position(const TrajectoryEnsemble& ens, const CouplingParams& coupling);

ActionEnsemble to_action(const TrajectoryEnsemble& ens, const UnitsConfig& units);

/// Final-time maps for A(xi): xi' = xi0, P' = P0, theta' = theta0 - eps A'(xi0) P0 (mod 2 pi),
/// Q' = Q0 + eps A(xi0).
ActionEnsemble flow_action(const ActionEnsemble& ens, const ClassicalObservable& obs,
                           const CouplingParams& coupling);

/// State at time t during a smooth pulse; G(t) replaces the unit final-time factor.
kernels::PhasePoint position_trajectory(const kernels::PhasePoint& initial, const CouplingParams& coupling,
                                        const CouplingProfile& profile, double t);
kernels::ActionPoint action_trajectory(const kernels::ActionPoint& initial, const ClassicalObservable& obs,
                                       const CouplingParams& coupling, const CouplingProfile& profile,
                                       double t);

/// Scaling estimate (sigma_Q / eps) (eps sigma_P). Not an inequality: the
/// classical product can be made arbitrarily small.
struct UncertaintyDisturbance {
  double resolution = 0.0;
  double disturbance = 0.0;
  double product = 0.0;
};

UncertaintyDisturbance uncertainty_disturbance_product(const ProbeSpec& probe, const CouplingParams& coupling);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> mass;  // fraction of samples per bin
  std::size_t outside = 0;

  std::size_t bins() const noexcept { return mass.size(); }
  double width() const noexcept { return (hi - lo) / static_cast<double>(mass.size()); }
  std::vector<double> edges() const;
};

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

/// Exact integral of the piecewise-linear interpolant of `density` over each bin.
std::vector<double> bin_masses(const Grid1D& grid, std::span<const double> density, double lo, double hi,
                               std::size_t bins);

/// sum_b |hist.mass_b - reference_b| plus the mismatch of the mass outside the
/// range, which for the reference is 1 - sum_b reference_b.
double l1_distance(const Histogram& hist, std::span<const double> reference);

}  // namespace vnm::mc
