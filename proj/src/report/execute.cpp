#include <algorithm>
#include <cmath>

#include "params.hpp"
#include "vnm/angle_action.hpp"
#include "vnm/cm/angle_spectral.hpp"
#include "vnm/cm/measurement.hpp"
#include "vnm/error.hpp"
#include "vnm/qm/measurement.hpp"
#include "vnm/qm/wigner.hpp"

namespace vnm::report {

using scenarios::Comparison;
using scenarios::make_check;
using scenarios::ScenarioResult;
using scenarios::Series;

namespace detail {

namespace {

double polynomial(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Series grid_series(std::string name, const Grid1D& g, std::string axis, std::string units,
                   std::vector<std::string> column_names, std::vector<std::vector<double>> columns) {
  Series s;
  s.name = std::move(name);
  s.axis = std::move(axis);
  s.axis_units = units;
  s.value_units = "1/" + units;
  s.axis_values = g.nodes();
  s.column_names = std::move(column_names);
  s.columns = std::move(columns);
  return s;
}

std::vector<double> real_diagonal(const Eigen::MatrixXcd& m) {
  std::vector<double> d(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) d[static_cast<std::size_t>(i)] = m(i, i).real();
  return d;
}

}  // namespace

ScenarioResult evolve_qm(const EvolveQmParams& p, const scenarios::ToleranceOverrides& tol) {
  const Grid1D xg = p.xgrid.grid(), pg = p.pgrid.grid();
  ScenarioResult r;
  r.name = "evolve_qm";
  r.inputs = {{"mean_x", p.mean_x}, {"sigma_x", p.sigma_x}, {"sigma_p", p.sigma_p}, {"hbar", p.hbar},
              {"epsilon", p.epsilon}, {"tau", p.tau}, {"x_n", double(xg.size())}, {"p_n", double(pg.size())}};

  const auto rho = gaussian_density_operator(xg, p.mean_x, p.sigma_x, p.sigma_p, p.hbar);
  std::vector<double> a(xg.size());
  for (std::size_t i = 0; i < xg.size(); ++i) a[i] = polynomial(p.polynomial, xg.node(i));
  const auto obs = SpectralObservable::diagonal(a);
  const auto coupling = CouplingParams::from_tau(p.epsilon, p.tau);
  const auto post = qm::reduced_state_post(rho, obs, qm::decoherence_kernel(obs, coupling, p.hbar));

  const auto op = check_operator(post);
  r.checks.push_back(make_check("trace", "|Tr rho' - 1|", op.trace_error, 0.0, 1e-10, Comparison::AtMost, "analytic", tol));
  r.checks.push_back(make_check("hermiticity", "max |rho' - rho'^dagger|", op.hermiticity, 0.0, 1e-12,
                                Comparison::AtMost, "analytic", tol));
  r.checks.push_back(make_check("positivity", "-min eigenvalue of rho'", -op.min_eigenvalue, 0.0, 1e-10,
                                Comparison::AtMost, "analytic", tol));

  const auto before = real_diagonal(rho.matrix()), after = real_diagonal(post.matrix());
  double drift = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) drift = std::max(drift, std::fabs(after[i] - before[i]));
  r.checks.push_back(make_check("position_distribution_unchanged", "max_i |<x_i|rho' - rho|x_i>|", drift, 0.0, 1e-10,
                                Comparison::AtMost, "analytic", tol));

  const qm::WignerEvolutionSpec spec{[c = p.polynomial](double x) { return polynomial(c, x); }, p.tau};
  const auto w0 = qm::wigner_transform(rho, pg, p.hbar);
  const auto w1 = qm::evolved_wigner(rho, spec, pg, p.hbar);
  const auto w_ref = qm::wigner_transform(post, pg, p.hbar);
  r.checks.push_back(make_check("wigner_normalization", "Wigner normalization after the channel", w1.normalization(),
                                1.0, 1e-6, Comparison::AbsDiff, "analytic", tol));
  r.checks.push_back(make_check("wigner_channel_consistency", "max |W[rho'] - evolved W|",
                                (w1.values() - w_ref.values()).cwiseAbs().maxCoeff(), 0.0, 1e-10, Comparison::AtMost,
                                "oracle", tol));

  const auto pm0 = w0.p_marginal(), pm1 = w1.p_marginal();
  const double var0 = moments(pg, pm0).variance, var1 = moments(pg, pm1).variance;
  r.scalars = {{"p_variance_before", var0}, {"p_variance_after", var1},
               {"disturbance", qm::disturbance_measure(rho, coupling, p.hbar)},
               {"wigner_imag_residue", w1.max_imag_residue()}};
  const bool linear = std::all_of(p.polynomial.begin() + std::min<std::ptrdiff_t>(2, std::ssize(p.polynomial)),
                                  p.polynomial.end(), [](double c) { return c == 0.0; });
  if (linear) {
    const double c1 = p.polynomial.size() > 1 ? p.polynomial[1] : 0.0;
    r.checks.push_back(make_check("momentum_variance", "p variance after the channel vs s^2 + 2 tau c1^2", var1,
                                  p.sigma_p * p.sigma_p + 2.0 * p.tau * c1 * c1, 1e-4, Comparison::AbsDiff,
                                  "closed form", tol));
  }

  r.series.push_back(grid_series("position", xg, "x", "length", {"before", "after"},
                                 {std::vector<double>(before), std::vector<double>(after)}));
  for (auto& v : r.series.back().columns)
    for (auto& x : v) x /= xg.spacing();
  r.series.push_back(grid_series("momentum", pg, "p", "momentum", {"before", "after"}, {pm0, pm1}));
  return r;
}

ScenarioResult evolve_cm(const EvolveCmParams& p, const scenarios::ToleranceOverrides& tol) {
  const Grid1D qg = p.qgrid.grid(), pg = p.pgrid.grid();
  ScenarioResult r;
  r.name = "evolve_cm";
  r.inputs = {{"sigma_q", p.sigma_q}, {"sigma_p", p.sigma_p}, {"scale_C", p.scale_C}, {"epsilon", p.epsilon},
              {"tau", p.tau}, {"q_n", double(qg.size())}, {"p_n", double(pg.size())}};
  r.notes["observable"] = p.kind;

  const auto rho = build_gaussian_phase_density(qg, pg, p.sigma_q, p.sigma_p);
  const bool position = p.kind == "position";
  const UnitsConfig units{1.0, p.scale_C};
  const auto obs = position ? ClassicalObservable::position() : ClassicalObservable::action_polynomial(p.coefficients, units);
  const auto post = cm::reduced_state_post_cm(rho, obs, p.tau);

  r.checks.push_back(make_check("mass", "|mass' - mass|", std::fabs(post.mass() - rho.mass()), 0.0, 1e-6,
                                Comparison::AtMost, "analytic", tol));
  r.checks.push_back(make_check("positivity", "-min rho'", std::max(0.0, -post.values().minCoeff()), 0.0, 1e-10, Comparison::AtMost,
                                "analytic", tol));

  const auto pm0 = marginal(rho, Axis::P), pm1 = marginal(post, Axis::P);
  const auto qm0 = marginal(rho, Axis::Q), qm1 = marginal(post, Axis::Q);
  r.scalars = {{"p_variance_before", moments(pg, pm0).variance}, {"p_variance_after", moments(pg, pm1).variance},
               {"q_variance_after", moments(qg, qm1).variance}};
  if (position) {
    double drift = 0.0;
    for (std::size_t i = 0; i < qm0.size(); ++i) drift = std::max(drift, std::fabs(qm1[i] - qm0[i]));
    r.checks.push_back(make_check("q_marginal_unchanged", "max |rho'(q) - rho(q)|", drift, 0.0, 1e-8,
                                  Comparison::AtMost, "analytic", tol));
    r.checks.push_back(make_check("momentum_variance", "p variance after the channel vs s^2 + 2 tau",
                                  r.scalars["p_variance_after"], p.sigma_p * p.sigma_p + 2.0 * p.tau, 1e-4,
                                  Comparison::AbsDiff, "closed form", tol));
  } else {
    // The action marginal is compared where the solver acts, before resampling.
    const double xi_max = inscribed_xi_max(qg, pg, units);
    const Grid1D xig(0.0, xi_max, 8 * std::max(qg.size(), pg.size()));
    const std::size_t nth = std::max<std::size_t>(256, 2 * pg.size());
    const auto aa0 = to_angle_action(rho, units, xig, nth);
    const auto aa1 = cm::angle_spectral_solve(aa0, obs, p.tau, nth / 2);
    const auto x0 = aa0.xi_marginal(), x1 = aa1.xi_marginal();
    double drift = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) drift = std::max(drift, std::fabs(x1[i] - x0[i]));
    r.checks.push_back(make_check("xi_marginal_unchanged", "max |rho'(xi) - rho(xi)| in angle-action variables",
                                  drift, 0.0, 1e-10, Comparison::AtMost, "analytic", tol));
    r.series.push_back(grid_series("xi_marginal", xig, "xi", "action", {"before", "after"}, {x0, x1}));
  }
  r.series.push_back(grid_series("q_marginal", qg, "q", "length", {"before", "after"}, {qm0, qm1}));
  r.series.push_back(grid_series("p_marginal", pg, "p", "momentum", {"before", "after"}, {pm0, pm1}));
  return r;
}

Plan plan(const RunConfig& cfg) {
  Plan out;
  Reader r(cfg.parameters, "parameters");
  const auto& tol = cfg.tolerances;
  switch (cfg.command) {
    case Command::RunScenario: {
      const auto name = r.string("scenario", "");
      if (name == "two_delta") {
        out.tasks.emplace_back([p = two_delta_params(r), tol] { return scenarios::scenario_two_delta(p, tol); });
      } else if (name == "interference") {
        out.tasks.emplace_back([p = interference_params(r), tol] { return scenarios::scenario_interference(p, tol); });
      } else if (name == "number_basis") {
        out.tasks.emplace_back([p = number_basis_params(r), tol] { return scenarios::scenario_number_basis(p, tol); });
      } else if (name == "gaussian_bessel") {
        out.tasks.emplace_back(
            [p = gaussian_bessel_params(r), tol] { return scenarios::scenario_gaussian_bessel(p, tol); });
      } else {
        fail(ErrorCode::ConfigInvalid, "parameters.scenario: expected one of two_delta, interference, number_basis, "
                                       "gaussian_bessel");
      }
      break;
    }
    case Command::McCompare: {
      const auto which = r.strings("observables", {"position", "action"});
      Reader pos = r.object("position"), act = r.object("action");
      const auto pp = mc_position_params(pos, cfg.seed);
      const auto pa = mc_action_params(act, cfg.seed + 1);
      pos.finish();
      act.finish();
      for (const auto& w : which) {
        if (w == "position")
          out.tasks.emplace_back([pp, tol] { return scenarios::scenario_mc_position(pp, tol); });
        else if (w == "action")
          out.tasks.emplace_back([pa, tol] { return scenarios::scenario_mc_action(pa, tol); });
        else
          fail(ErrorCode::ConfigInvalid, "parameters.observables: unknown entry '" + w + "'");
      }
      break;
    }
    case Command::EvolveQm:
      out.tasks.emplace_back([p = evolve_qm_params(r), tol] { return evolve_qm(p, tol); });
      break;
    case Command::EvolveCm:
      out.tasks.emplace_back([p = evolve_cm_params(r), tol] { return evolve_cm(p, tol); });
      break;
    case Command::Table1Report:
      out.table1 = table1_params(r);
      break;
  }
  r.finish();
  return out;
}

}  // namespace detail

void validate_parameters(const RunConfig& config) { (void)detail::plan(config); }

bool JobOutput::passed() const noexcept {
  return std::all_of(results.begin(), results.end(), [](const ScenarioResult& s) { return s.passed(); });
}

JobOutput execute(const RunConfig& config) {
  const auto job = detail::plan(config);
  JobOutput out;
  out.command = config.command;
  for (const auto& task : job.tasks) out.results.push_back(task());
  if (job.table1) {
    out.table1 = table1_report(*job.table1, config.tolerances);
    out.results.push_back(out.table1->result);
  }
  return out;
}

}  // namespace vnm::report
