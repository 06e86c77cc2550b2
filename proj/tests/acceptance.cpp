// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance <path to the vnm CLI>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnm/angle_action.hpp"
#include "vnm/cm/angle_spectral.hpp"
#include "vnm/cm/measurement.hpp"
#include "vnm/density_operator.hpp"
#include "vnm/qm/measurement.hpp"
#include "vnm/qm/wigner.hpp"
#include "vnm/random.hpp"
#include "vnm/report.hpp"
#include "vnm/scenarios.hpp"

using namespace vnm;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs(const RealField& f) { return f.cwiseAbs().maxCoeff(); }

double max_drift(const std::vector<double>& a, const std::vector<double>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::fabs(a[i] - b[i]));
  return w;
}

const scenarios::Check& check_named(const scenarios::ScenarioResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + r.name + "." + name);
}

// Random eigenvalues in [-1, 1] with one degenerate pair for dim > 2.
SpectralObservable random_observable(std::size_t dim, CounterRng& rng) {
  std::vector<double> eig(dim);
  for (auto& e : eig) e = 2.0 * rng.uniform() - 1.0;
  if (dim > 2) eig[1] = eig[0];
  return SpectralObservable::from_matrix(random_hermitian(eig, rng));
}

Outcome mean_pointer_law() {
  double worst = 0.0;
  const Grid1D xg(-8.0, 8.0, 256);
  for (std::uint64_t i = 0; i < 20; ++i) {
    CounterRng rng(101, i);
    const double eps = 0.5 + 1.5 * rng.uniform();
    const ProbeSpec probe{0.2 + 0.5 * rng.uniform(), 0.0};
    const auto coupling = CouplingParams::from_tau(eps, 0.0);

    // Quantum: two-packet Gaussian mixture on a position grid, A(x) = x + c x^2.
    const double c2 = 0.1 * rng.uniform();
    const double w = 0.2 + 0.6 * rng.uniform();
    const double sx1 = 0.6 + 0.6 * rng.uniform(), sx2 = 0.6 + 0.6 * rng.uniform();
    const auto rho = mix(w, gaussian_density_operator(xg, 2.0 * rng.uniform() - 1.0, sx1, 0.5 / sx1 + rng.uniform()),
                         1.0 - w, gaussian_density_operator(xg, 2.0 * rng.uniform() - 1.0, sx2, 0.5 / sx2 + 0.5 * rng.uniform()));
    std::vector<double> a(xg.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = xg.node(k) + c2 * xg.node(k) * xg.node(k);
    const auto obs = SpectralObservable::diagonal(a);
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    const double reach = 10.0 * probe.sigma_Q;
    const Grid1D Q(eps * *lo - reach, eps * *hi + reach,
                   static_cast<std::size_t>((eps * (*hi - *lo) + 2.0 * reach) / (0.05 * probe.sigma_Q)) + 1);
    const double q_mean = moments(Q, qm::pointer_distribution(rho, obs, probe, coupling, Q)).mean;
    const double trace_mean = trace_with(rho, obs.matrix()).real();
    worst = std::max(worst, std::fabs(q_mean / eps - trace_mean));

    // Classical: random Gaussian mixture, A = q.
    const Grid1D qg(-8.0, 8.0, 161), pg(-8.0, 8.0, 33);
    const auto comps = random_gaussian_mixture(1 + i % 3, 1.5, 0.5, 1.2, rng);
    const auto rc = build_gaussian_mixture(qg, pg, comps);
    const auto pos = ClassicalObservable::position();
    const Grid1D Qc(-eps * 8.0 - reach, eps * 8.0 + reach,
                    static_cast<std::size_t>((16.0 * eps + 2.0 * reach) / (0.05 * probe.sigma_Q)) + 1);
    const double c_mean = moments(Qc, cm::probe_marginal_Q(rc, probe, pos, coupling, Qc)).mean;
    const double a_mean = expectation(rc, pos.sample(qg, pg)) / rc.mass();
    worst = std::max(worst, std::fabs(c_mean / eps - a_mean));
  }
  return {worst <= 1e-8, "max |<Q>'/eps - <A>| = " + fmt(worst) + " over 20 + 20 states (<= 1e-8)"};
}

Outcome distribution_invariance() {
  double worst_q = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(202, i);
    const auto dim = 2 + static_cast<std::size_t>(rng.uniform() * 6.0);
    const auto obs = random_observable(dim, rng);
    const DensityOperator rho(NumberBasis{dim}, random_density_matrix(dim, 1 + i % dim, rng));
    const auto k = qm::decoherence_kernel(obs, CouplingParams::from_tau(1.0, 3.0 * rng.uniform()));
    worst_q = std::max(worst_q, max_drift(born_weights(qm::reduced_state_post(rho, obs, k), obs), born_weights(rho, obs)));
  }

  // p axis wide enough that the diffused tails stay 8 sigma inside it.
  const Grid1D qg(-8.0, 8.0, 256), pg(-14.0, 14.0, 256);
  double worst_pos = 0.0, worst_xi = 0.0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    CounterRng rng(203, i);
    const auto comps = random_gaussian_mixture(2, 1.0, 0.6, 1.2, rng);
    const auto rho = build_gaussian_mixture(qg, pg, comps);
    const double tau = 0.1 + rng.uniform();
    const auto pos = ClassicalObservable::position();
    worst_pos = std::max(worst_pos, max_drift(marginal(cm::reduced_state_post_cm(rho, pos, tau), Axis::Q),
                                              marginal(rho, Axis::Q)));
    // The A(xi) channel acts along theta at fixed xi; the marginal is read there.
    const auto act = ClassicalObservable::action_polynomial({0.0, 0.5 + rng.uniform(), 0.3 * rng.uniform()});
    const auto aa = to_angle_action(gaussian_mixture_function(comps), act.units(), Grid1D(0.0, 30.0, 1501), 256);
    worst_xi = std::max(worst_xi, max_drift(cm::angle_spectral_solve(aa, act, tau, 128).xi_marginal(), aa.xi_marginal()));
  }
  const bool ok = worst_q <= 1e-10 && worst_pos <= 1e-8 && worst_xi <= 1e-8;
  return {ok, "QM " + fmt(worst_q) + " (<= 1e-10, 100 states); CM q-marginal " + fmt(worst_pos) + ", xi-marginal " +
                  fmt(worst_xi) + " (<= 1e-8)"};
}

Outcome lueders_limit() {
  double worst_excess = -1.0, worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    CounterRng rng(303, i);
    const auto dim = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
    const auto obs = random_observable(dim, rng);
    const DensityOperator rho(NumberBasis{dim}, random_density_matrix(dim, dim, rng));
    const double gap = obs.min_gap();
    const double hbar = 1.0;
    const auto k = qm::decoherence_kernel(obs, CouplingParams::from_tau(1.0, 50.0 * hbar * hbar / (gap * gap)), hbar);
    const double d = trace_distance(qm::reduced_state_post(rho, obs, k).matrix(), qm::lueders_nonselective(rho, obs).matrix());
    worst = std::max(worst, d);
    worst_excess = std::max(worst_excess, d - (std::exp(-50.0) + 1e-12));
  }
  return {worst_excess <= 0.0, "max trace distance " + fmt(worst) + " (<= e^-50 + 1e-12, 20 states)"};
}

Outcome derivative_checks() {
  // QM: forward difference of the exact channel against the Lindblad generator.
  const double dt = 1e-4;
  double worst_q = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    CounterRng rng(404, i);
    const std::size_t dim = 4;
    std::vector<double> eig(dim);
    for (auto& e : eig) e = 2.0 * rng.uniform() - 1.0;
    const Eigen::MatrixXcd a = random_hermitian(eig, rng);
    const Eigen::MatrixXcd rho = random_density_matrix(dim, 3, rng);
    const double tau = rng.uniform();
    const Eigen::MatrixXcd r0 = qm::lindblad_evolve(rho, a, tau);
    const Eigen::MatrixXcd rhs = qm::lindblad_rhs(r0, a);
    const Eigen::MatrixXcd fd = (qm::lindblad_evolve(rho, a, tau + dt) - r0) / dt;
    worst_q = std::max(worst_q, (fd - rhs).norm() / rhs.norm());
  }

  // CM: error ~ c1 dtau + c2 h^2. Forward differences on a fine grid expose the
  // dtau order, centered differences at small dtau expose the h order.
  const auto pos = ClassicalObservable::position();
  auto error = [&](std::size_t np, double d, bool centered) {
    const Grid1D qg(-5.0, 5.0, 16), pg(-10.0, 10.0, np);
    const auto rho = build_gaussian_phase_density(qg, pg, 0.8, 1.0);
    const double t0 = 0.2;
    const auto r0 = cm::reduced_state_post_cm(rho, pos, t0);
    const RealField lo = centered ? cm::reduced_state_post_cm(rho, pos, t0 - d).values() : r0.values();
    const RealField fd = (cm::reduced_state_post_cm(rho, pos, t0 + d).values() - lo) / (centered ? 2.0 * d : d);
    const RealField rhs = cm::cm_diffusion_rhs(r0, pos);
    return max_abs(fd - rhs) / max_abs(rhs);
  };
  const double e1 = error(1601, 2e-3, false), e2 = error(1601, 1e-3, false);
  const double h1 = error(101, 1e-4, true), h2 = error(201, 1e-4, true);
  const double t_order = std::log2(e1 / e2), h_order = std::log2(h1 / h2);
  const bool orders = std::fabs(t_order - 1.0) <= 0.15 && std::fabs(h_order - 2.0) <= 0.15;
  const double hh = 20.0 / 200.0;
  const bool bound = h2 <= 10.0 * 1e-4 + hh * hh;
  const bool ok = worst_q <= 10.0 * dt && orders && bound;
  return {ok, "QM rel err " + fmt(worst_q) + " (<= 10 dtau = 1e-3); CM observed orders dtau " + fmt(t_order) +
                  ", h " + fmt(h_order) + " (1, 2 +- 0.15), centered err " + fmt(h2) + " (<= 10 dtau + h^2)"};
}

Outcome variance_growth() {
  const Grid1D xg(-8.0, 8.0, 256), pg(-8.0, 8.0, 256);
  const double sx = 1.0, s = 1.0;
  double worst = 0.0;
  std::string per;
  for (double tau : {0.1, 0.3, 0.6}) {
    const auto rho_q = gaussian_density_operator(xg, 0.0, sx, s);
    const auto w = qm::evolved_wigner(rho_q, {[](double x) { return x; }, tau}, pg);
    const double vq = moments(pg, w.p_marginal()).variance;
    const auto rho_c = build_gaussian_phase_density(xg, pg, sx, s);
    const double vc = moments(pg, marginal(cm::reduced_state_post_cm(rho_c, ClassicalObservable::position(), tau), Axis::P)).variance;
    const double expected = s * s + 2.0 * tau;
    worst = std::max({worst, std::fabs(vq - expected), std::fabs(vc - expected)});
  }
  return {worst <= 1e-4, "max |var p' - (s^2 + 2 tau)| = " + fmt(worst) + " for QM and CM at tau 0.1, 0.3, 0.6 (<= 1e-4)"};
}

Outcome angle_spectral() {
  const Grid1D xg(0.0, 10.0, 201);
  const PeriodicGrid tg(64);
  RealField v(xg.size(), tg.size());
  for (std::size_t i = 0; i < xg.size(); ++i)
    for (std::size_t j = 0; j < tg.size(); ++j) v(i, j) = std::exp(-xg.node(i)) * (1.0 + std::cos(tg.node(j))) / (2.0 * pi);
  const AngleActionDensity rho(xg, tg, v);
  const auto one = [](double) { return 1.0; };
  double mode = 0.0;
  for (double tau : {0.1, 0.5, 2.0}) {
    const auto out = cm::angle_spectral_solve(rho, one, tau);
    for (std::size_t i = 0; i < xg.size(); ++i)
      for (std::size_t j = 0; j < tg.size(); ++j)
        mode = std::max(mode, std::fabs(out.values()(i, j) -
                                       std::exp(-xg.node(i)) * (1.0 + std::exp(-tau) * std::cos(tg.node(j))) / (2.0 * pi)));
  }
  // tau (dA/dxi)^2 = 40 with dA/dxi = 2.
  const auto strong = cm::angle_spectral_solve(rho, [](double) { return 2.0; }, 10.0);
  double spread = 0.0;
  for (std::size_t i = 0; i < xg.size(); ++i)
    spread = std::max(spread, strong.values().row(i).maxCoeff() - strong.values().row(i).minCoeff());
  return {mode <= 1e-12 && spread <= 1e-10,
          "single-mode error " + fmt(mode) + " (<= 1e-12); theta spread at 40 = " + fmt(spread) + " (<= 1e-10)"};
}

Outcome bessel_marginal() {
  double worst = 0.0;
  bool ok = true;
  for (double ratio : {0.5, 1.0, 2.0}) {
    scenarios::GaussianBesselParams p;
    p.sigma_qbar = 1.5;
    p.sigma_pbar = 1.5 * ratio;
    p.xi_max = 10.0;
    const auto r = scenarios::scenario_gaussian_bessel(p);
    const auto& c = check_named(r, "bessel_profile");
    worst = std::max(worst, c.measured);
    ok = ok && c.pass && c.tolerance <= 1e-6;
  }
  return {ok && worst <= 1e-6, "max relative error vs I0 profile " + fmt(worst) + " on xi in [0, 10] (<= 1e-6)"};
}

Outcome ordering_equivalence() {
  const ProbeSpec probe{0.4, 0.7};
  const auto c = CouplingParams::from_probe(1.3, probe);
  const auto act = ClassicalObservable::action_polynomial({0.0, 1.0, 0.25});
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(808, i);
    const auto f = gaussian_mixture_function(random_gaussian_mixture(1 + i % 3, 1.0, 0.5, 1.5, rng));
    const auto& obs = i % 2 == 0 ? ClassicalObservable::position() : act;
    const auto joint = cm::joint_state_post(f, probe, obs, c);
    const double q = 4 * rng.uniform() - 2, p = 4 * rng.uniform() - 2, Q = 4 * rng.uniform() - 2, P = 2 * rng.uniform() - 1;
    const double a = joint(q, p, Q, P, cm::FactorOrdering::ShiftThenFlow);
    const double b = joint(q, p, Q, P, cm::FactorOrdering::FlowThenShift);
    worst = std::max(worst, std::fabs(a - b));
  }
  return {worst <= 1e-10, "max |ShiftThenFlow - FlowThenShift| = " + fmt(worst) + " over 100 inputs (<= 1e-10)"};
}

Outcome collapse() {
  double worst_q = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    CounterRng rng(909, i);
    const std::size_t dim = 3 + i % 3;
    std::vector<double> eig(dim);
    for (std::size_t k = 0; k < dim; ++k) eig[k] = static_cast<double>(k) + 0.5 * rng.uniform();
    const auto obs = SpectralObservable::from_matrix(random_hermitian(eig, rng));
    const DensityOperator rho(NumberBasis{dim}, random_density_matrix(dim, dim, rng));
    const double eps = 1.0 + rng.uniform();
    const ProbeSpec probe{0.01 * eps * obs.min_gap(), 0.0};
    const auto coupling = CouplingParams::from_tau(eps, 0.0);
    for (std::size_t n = 0; n < obs.num_eigenvalues(); ++n) {
      const Eigen::MatrixXcd pn = obs.projector(n);
      Eigen::MatrixXcd sandwich = pn * rho.matrix() * pn;
      sandwich /= sandwich.trace().real();
      const auto cond = qm::conditional_state(rho, obs, probe, coupling, eps * obs.eigenvalues()[n]);
      worst_q = std::max(worst_q, trace_distance(cond.matrix(), sandwich));
    }
  }

  const Grid1D qg(-6.0, 6.0, 1201), pg(-8.0, 8.0, 129);
  const auto rho = build_gaussian_phase_density(qg, pg, 1.0, 1.0);
  const ProbeSpec probe{0.1, 0.3};
  double least = 1.0;
  for (double q0 : {-1.0, 0.0, 0.5}) {
    const double eps = 2.0;
    const auto cond = cm::conditional_state_cm(rho, probe, ClassicalObservable::position(),
                                               CouplingParams::from_probe(eps, probe), eps * q0);
    const auto qm = marginal(cond, Axis::Q);
    std::vector<double> inside(qm.size());
    for (std::size_t i = 0; i < qm.size(); ++i) inside[i] = std::fabs(qg.node(i) - q0) <= 3.0 * probe.sigma_Q / eps ? qm[i] : 0.0;
    least = std::min(least, trapezoid(qg, inside) / trapezoid(qg, qm));
  }
  return {worst_q <= 1e-3 && least >= 0.99,
          "QM trace distance to projector sandwich " + fmt(worst_q) + " (<= 1e-3); CM mass within 3 sigma_Q/eps " +
              fmt(least) + " (>= 0.99)"};
}

Outcome picture_equivalence() {
  const auto pos = scenarios::scenario_mc_position(scenarios::McPositionParams{});
  const auto act = scenarios::scenario_mc_action(scenarios::McActionParams{});
  const auto& lq = check_named(pos, "l1_Q");
  const auto& lp = check_named(pos, "l1_p");
  const auto& lt = check_named(act, "l1_theta");
  const auto& lx = check_named(act, "l1_xi");
  const double bound = 5.0 / std::sqrt(1e5);
  const bool l1 = std::max({lq.measured, lp.measured, lt.measured, lx.measured}) <= bound;
  const bool conserved = check_named(pos, "conserved_q_P").measured == 0.0 && check_named(act, "conserved_xi_P").measured == 0.0;
  return {l1 && conserved, "L1 Q " + fmt(lq.measured) + ", p " + fmt(lp.measured) + ", theta " + fmt(lt.measured) +
                               ", xi " + fmt(lx.measured) + " (<= " + fmt(bound) + "); conserved mismatches " +
                               fmt(check_named(pos, "conserved_q_P").measured + check_named(act, "conserved_xi_P").measured)};
}

Outcome interference() {
  const auto r = scenarios::scenario_interference(scenarios::InterferenceParams{});
  const auto& vis = check_named(r, "interference_visible");
  const auto& mixture = check_named(r, "mixture_residual");
  return {vis.measured > 0.05 && mixture.measured <= 1e-12,
          "superposition residual " + fmt(vis.measured) + " (> 0.05); mixture residual " + fmt(mixture.measured) +
              " (<= 1e-12)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome table1(const std::string& cli) {
  const auto base = fs::temp_directory_path() / "vnm_acceptance_table1";
  fs::remove_all(base);
  int rc[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    const std::string cmd = "\"" + cli + "\" table1-report --out \"" + (base / std::to_string(k)).string() + "\" > /dev/null";
    rc[k] = std::system(cmd.c_str());
  }
  bool identical = rc[0] == 0 && rc[1] == 0;
  std::size_t files = 0;
  if (identical) {
    for (const auto& e : fs::directory_iterator(base / "0")) {
      const auto name = e.path().filename();
      ++files;
      if (name == "manifest.json") {
        auto a = nlohmann::json::parse(slurp(e.path())), b = nlohmann::json::parse(slurp(base / "1" / name));
        for (auto* m : {&a, &b}) {
          m->erase("started_utc");
          m->erase("finished_utc");
        }
        identical = identical && a == b;
      } else {
        identical = identical && fs::exists(base / "1" / name) && slurp(e.path()) == slurp(base / "1" / name);
      }
    }
  }
  const auto rep = report::table1_report(report::Table1Params{});
  const bool rows = rep.rows.size() == 4 &&
                    std::all_of(rep.rows.begin(), rep.rows.end(), [](const report::Table1Row& r) { return r.pass(); });
  std::string names;
  for (const auto& r : rep.rows) names += (names.empty() ? "" : ",") + r.id + (r.pass() ? "" : "(fail)");
  return {rows && identical, "rows " + names + "; CLI exit " + std::to_string(rc[0]) + "/" + std::to_string(rc[1]) +
                                 "; rerun identical over " + std::to_string(files) + " files: " + (identical ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <vnm cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mean-pointer law", mean_pointer_law},
      {"A-distribution invariance", distribution_invariance},
      {"Lueders limit", lueders_limit},
      {"Lindblad and classical diffusion derivatives", derivative_checks},
      {"variance growth s^2 + 2 tau", variance_growth},
      {"angle-spectral solver", angle_spectral},
      {"Gaussian to Bessel marginal", bessel_marginal},
      {"factor ordering equivalence", ordering_equivalence},
      {"collapse", collapse},
      {"picture equivalence", picture_equivalence},
      {"interference vs mixture", interference},
      {"correspondence table report", [&] { return table1(cli); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
