#pragma once

#include <optional>
#include <vector>

#include "vnm/cm/liouville.hpp"
#include "vnm/observable.hpp"
#include "vnm/phase_space.hpp"
#include "vnm/probe.hpp"

namespace vnm::cm {

/// Which factor of exp(eps K) acts first.
enum class FactorOrdering {
  ShiftThenFlow,  // exp(eps A_op P) [rho_s(q,p) rho_pi(Q - eps A(q,p), P)]
  FlowThenShift,  // [exp(eps A_op P) rho_s](q,p) rho_pi(Q - eps A(q,p), P)
};

struct PdeConfig {
  double step = 0.0;  // 0 picks the stability bound (reduced channel) or 1e-2 (characteristics)
};

/// Joint system-probe density after the impulsive coupling, kept in factorized
/// lazy form and evaluated pointwise.
class JointEvolvedState {
 public:
  static constexpr std::size_t max_materialized_points = 64ull * 64ull * 64ull * 64ull;

  JointEvolvedState(PhaseSpaceFunction rho_s, ProbeSpec probe, ClassicalObservable obs,
                    CouplingParams coupling, std::optional<PdeConfig> pde = std::nullopt);

  double operator()(double q, double p, double Q, double P,
                    FactorOrdering ordering = FactorOrdering::FlowThenShift) const;

  /// Row-major (q, p, Q, P) samples. GridBudgetExceeded beyond 64^4 points.
  std::vector<double> materialize(const Grid1D& qgrid, const Grid1D& pgrid, const Grid1D& Qgrid,
                                  const Grid1D& Pgrid,
                                  FactorOrdering ordering = FactorOrdering::FlowThenShift) const;

 private:
  PhaseSpaceFunction rho_s_;
  ProbeSpec probe_;
  LiouvilleGenerator generator_;
  CouplingParams coupling_;
  double flow_step_;
};

/// UnsupportedObservable for General observables without a PdeConfig.
JointEvolvedState joint_state_post(PhaseSpaceFunction rho_s, const ProbeSpec& probe,
                                   const ClassicalObservable& obs, const CouplingParams& coupling,
                                   std::optional<PdeConfig> pde = std::nullopt);
JointEvolvedState joint_state_post(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                   const ClassicalObservable& obs, const CouplingParams& coupling,
                                   std::optional<PdeConfig> pde = std::nullopt);

/// rho'(Q) = int int rho_s(q,p) rho_pi(Q - eps A(q,p)) dq dp on Qgrid.
std::vector<double> probe_marginal_Q(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                     const ClassicalObservable& obs, const CouplingParams& coupling,
                                     const Grid1D& Qgrid);

/// eps <A>.
double probe_mean_Q(const PhaseSpaceDensity& rho_s, const ClassicalObservable& obs,
                    const CouplingParams& coupling);

struct ReducedChannelOptions {
  std::optional<PdeConfig> pde;              // General observables
  std::optional<Grid1D> xigrid;              // ActionFunction path; default [0, inscribed], 8 max(n_q, n_p) nodes
  std::size_t ntheta = 0;                    // 0: max(256, 2 * n_p)
  std::size_t mode_cutoff = 0;               // 0: ntheta / 2, i.e. no truncation
  Interpolation interpolation = Interpolation::Cubic;
};

/// rho' = exp(tau A_op^2) rho_s.
///   Position: exact Gaussian convolution in p (variance 2 tau) via FFT damping.
///   ActionFunction: resample to (xi, theta), angle_spectral_solve, resample back.
///   General: explicit Euler on apply_squared; StepSizeTooLarge above the bound.
PhaseSpaceDensity reduced_state_post_cm(const PhaseSpaceDensity& rho_s, const ClassicalObservable& obs,
                                        double tau, const ReducedChannelOptions& options = {});

/// rho'(q,p|Q) for A = q. NegligibleProbability when the evidence is below 1e-12.
PhaseSpaceDensity conditional_state_cm(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                       const ClassicalObservable& obs, const CouplingParams& coupling,
                                       double Q);

}  // namespace vnm::cm
