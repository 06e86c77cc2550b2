#include "vnm/cm/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "vnm/angle_action.hpp"
#include "vnm/cm/angle_spectral.hpp"
#include "vnm/error.hpp"
#include "vnm/kernels.hpp"

namespace vnm::cm {

namespace {

constexpr double kDefaultFlowStep = 1e-2;

RealField quadrature_weights(const Grid1D& qg, const Grid1D& pg) {
  const auto wq = trapezoid_weights(qg);
  const auto wp = trapezoid_weights(pg);
  RealField w(static_cast<Eigen::Index>(wq.size()), static_cast<Eigen::Index>(wp.size()));
  for (std::size_t i = 0; i < wq.size(); ++i)
    for (std::size_t j = 0; j < wp.size(); ++j) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = wq[i] * wp[j];
  return w;
}

PhaseSpaceDensity diffuse_position(const PhaseSpaceDensity& rho, double tau) {
  RealField rows = rho.values();
  const std::vector<double> rate(rho.qgrid().size(), 1.0);
  kernels::parallel::diffuse_rows(rows, rho.pgrid().spacing(), rate, tau);
  return PhaseSpaceDensity(rho.qgrid(), rho.pgrid(), std::move(rows));
}

PhaseSpaceDensity diffuse_action(const PhaseSpaceDensity& rho, const ClassicalObservable& obs, double tau,
                                 const ReducedChannelOptions& opt) {
  const auto& units = obs.units();
  const auto& qg = rho.qgrid();
  const auto& pg = rho.pgrid();
  const Grid1D xigrid = opt.xigrid.value_or(Grid1D(0.0, inscribed_xi_max(qg, pg, units), 8 * std::max(qg.size(), pg.size())));
  const std::size_t ntheta = opt.ntheta != 0 ? opt.ntheta : std::max<std::size_t>(256, 2 * pg.size());
  const std::size_t cutoff = opt.mode_cutoff != 0 ? opt.mode_cutoff : ntheta / 2;
  const auto aa = to_angle_action(rho, units, xigrid, ntheta, opt.interpolation);
  const auto solved = angle_spectral_solve(aa, obs, tau, cutoff);
  return from_angle_action(solved, units, qg, pg, opt.interpolation);
}

PhaseSpaceDensity diffuse_general(const PhaseSpaceDensity& rho, const ClassicalObservable& obs, double tau,
                                  const ReducedChannelOptions& opt) {
  const LiouvilleGenerator gen(obs);
  const double bound = gen.stable_step(rho.qgrid(), rho.pgrid());
  double step = bound;
  if (opt.pde && opt.pde->step > 0.0) {
    require(opt.pde->step <= bound, ErrorCode::StepSizeTooLarge,
            "step " + std::to_string(opt.pde->step) + " exceeds the stability bound " + std::to_string(bound));
    step = opt.pde->step;
  }
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau / step)));
  const double dt = tau / static_cast<double>(n);
  RealField f = rho.values();
  for (std::size_t k = 0; k < n; ++k) f += dt * gen.apply_squared(f, rho.qgrid(), rho.pgrid());
  return PhaseSpaceDensity(rho.qgrid(), rho.pgrid(), std::move(f));
}

}  // namespace

JointEvolvedState::JointEvolvedState(PhaseSpaceFunction rho_s, ProbeSpec probe, ClassicalObservable obs,
                                     CouplingParams coupling, std::optional<PdeConfig> pde)
    : rho_s_(std::move(rho_s)), probe_(probe), generator_(std::move(obs)), coupling_(coupling),
      flow_step_(pde && pde->step > 0.0 ? pde->step : kDefaultFlowStep) {
  probe_.validate();
  probe_.require_independent();
  require(probe_.sigma_P > 0.0, ErrorCode::UnsupportedProbe, "joint density needs a positive probe momentum width");
  require(generator_.mode() == GeneratorMode::FlowShift || pde.has_value(), ErrorCode::UnsupportedObservable,
          "general observables need a PDE configuration");
}

double JointEvolvedState::operator()(double q, double p, double Q, double P, FactorOrdering ordering) const {
  const double eps = coupling_.epsilon();
  const auto& obs = generator_.observable();
  const auto [fq, fp] = generator_.flow(q, p, eps * P, flow_step_);
  const double a = ordering == FactorOrdering::FlowThenShift ? obs(q, p) : obs(fq, fp);
  return rho_s_(fq, fp) * probe_.position_density(Q - eps * a) * probe_.momentum_density(P);
}

std::vector<double> JointEvolvedState::materialize(const Grid1D& qgrid, const Grid1D& pgrid, const Grid1D& Qgrid,
                                                   const Grid1D& Pgrid, FactorOrdering ordering) const {
  const std::size_t total = qgrid.size() * pgrid.size() * Qgrid.size() * Pgrid.size();
  require(total <= max_materialized_points, ErrorCode::GridBudgetExceeded,
          std::to_string(total) + " points exceed the materialization budget");
  std::vector<double> out(total);
  const auto nq = static_cast<std::ptrdiff_t>(qgrid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nq; ++i) {
    std::size_t idx = static_cast<std::size_t>(i) * pgrid.size() * Qgrid.size() * Pgrid.size();
    for (std::size_t j = 0; j < pgrid.size(); ++j)
      for (std::size_t k = 0; k < Qgrid.size(); ++k)
        for (std::size_t l = 0; l < Pgrid.size(); ++l)
          out[idx++] = (*this)(qgrid.node(static_cast<std::size_t>(i)), pgrid.node(j), Qgrid.node(k), Pgrid.node(l), ordering);
  }
  return out;
}

JointEvolvedState joint_state_post(PhaseSpaceFunction rho_s, const ProbeSpec& probe, const ClassicalObservable& obs,
                                   const CouplingParams& coupling, std::optional<PdeConfig> pde) {
  return JointEvolvedState(std::move(rho_s), probe, obs, coupling, pde);
}

JointEvolvedState joint_state_post(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                   const ClassicalObservable& obs, const CouplingParams& coupling,
                                   std::optional<PdeConfig> pde) {
  return JointEvolvedState(interpolator(rho_s, Interpolation::Cubic), probe, obs, coupling, pde);
}

std::vector<double> probe_marginal_Q(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                     const ClassicalObservable& obs, const CouplingParams& coupling,
                                     const Grid1D& Qgrid) {
  probe.validate();
  probe.require_independent();
  const RealField w = rho_s.values().cwiseProduct(quadrature_weights(rho_s.qgrid(), rho_s.pgrid()));
  const RealField a = obs.sample(rho_s.qgrid(), rho_s.pgrid());
  const auto Qs = Qgrid.nodes();
  return kernels::parallel::probe_marginal(w, a, coupling.epsilon(), probe.sigma_Q, Qs);
}

double probe_mean_Q(const PhaseSpaceDensity& rho_s, const ClassicalObservable& obs, const CouplingParams& coupling) {
  return coupling.epsilon() * expectation(rho_s, obs);
}

PhaseSpaceDensity reduced_state_post_cm(const PhaseSpaceDensity& rho_s, const ClassicalObservable& obs, double tau,
                                        const ReducedChannelOptions& options) {
  require(std::isfinite(tau) && tau >= 0.0, ErrorCode::InvalidArgument, "tau must be non-negative");
  if (tau == 0.0) return rho_s;
  switch (obs.kind()) {
    case ObservableKind::Position: return diffuse_position(rho_s, tau);
    case ObservableKind::ActionFunction: return diffuse_action(rho_s, obs, tau, options);
    case ObservableKind::General: return diffuse_general(rho_s, obs, tau, options);
  }
  fail(ErrorCode::UnsupportedObservable, "unknown observable kind");
}

PhaseSpaceDensity conditional_state_cm(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe,
                                       const ClassicalObservable& obs, const CouplingParams& coupling, double Q) {
  require(obs.kind() == ObservableKind::Position, ErrorCode::UnsupportedObservable,
          "conditional state is implemented for A = q");
  probe.validate();
  probe.require_independent();
  const PhaseSpaceDensity diffused = reduced_state_post_cm(rho_s, obs, coupling.tau());
  RealField v = diffused.values();
  const auto& qg = rho_s.qgrid();
  for (std::size_t i = 0; i < qg.size(); ++i)
    v.row(static_cast<Eigen::Index>(i)) *= probe.position_density(Q - coupling.epsilon() * qg.node(i));
  const PhaseSpaceDensity joint(qg, rho_s.pgrid(), std::move(v));
  const double evidence = joint.mass();
  require(evidence >= 1e-12, ErrorCode::NegligibleProbability,
          "pointer reading has probability density " + std::to_string(evidence));
  return PhaseSpaceDensity(qg, rho_s.pgrid(), joint.values() / evidence);
}

}  // namespace vnm::cm
