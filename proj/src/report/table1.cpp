#include <cmath>

#include "vnm/cm/liouville.hpp"
#include "vnm/cm/measurement.hpp"
#include "vnm/error.hpp"
#include "vnm/qm/measurement.hpp"
#include "vnm/qm/wigner.hpp"
#include "vnm/report.hpp"

namespace vnm::report {

using scenarios::Comparison;
using scenarios::make_check;

namespace {

// Pointer axis wide enough for eps * A over the state's support plus the probe tails.
Grid1D pointer_grid(const Table1Params& p, const Grid1D& xg) {
  const double reach = p.epsilon * std::max(std::fabs(xg.lo()), std::fabs(xg.hi())) + 8.0 * p.sigma_Q;
  const double h = p.sigma_Q / 16.0;
  return Grid1D(-reach, reach, static_cast<std::size_t>(std::ceil(2.0 * reach / h)) + 1);
}

double max_abs(const RealField& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

Table1Report table1_report(const Table1Params& p, const scenarios::ToleranceOverrides& tol) {
  require(p.epsilon > 0.0 && p.sigma_x > 0.0 && p.hbar > 0.0 && p.sigma_Q > 0.0 && p.tau >= 0.0 && p.dtau > 0.0,
          ErrorCode::InvalidArgument, "table1: widths, epsilon and dtau must be positive");
  const Grid1D xg = p.xgrid.grid(), pg = p.pgrid.grid();
  const Grid1D Qg = pointer_grid(p, xg);
  const double s = 0.5 * p.hbar / p.sigma_x;  // minimum-uncertainty momentum width
  const ProbeSpec probe{p.sigma_Q, 0.0};
  const auto coupling = CouplingParams::from_tau(p.epsilon, p.tau);
  const double eps = p.epsilon;

  // Quantum side: Gaussian packet on the position grid, A = x.
  const auto rho_q = gaussian_density_operator(xg, p.mean, p.sigma_x, s, p.hbar);
  const auto xs = xg.nodes();
  const auto obs_q = SpectralObservable::diagonal(xs);
  const Eigen::MatrixXcd a_mat = obs_q.matrix();

  // Classical side: the matching product Gaussian, A = q.
  const GaussianComponent g{1.0, p.mean, 0.0, p.sigma_x, s, 0.0};
  const auto rho_c = build_gaussian_mixture(xg, pg, std::span<const GaussianComponent>(&g, 1));
  const auto pos = ClassicalObservable::position();
  // The pointer integral is flat in p for A = q; a coarse p axis keeps it cheap.
  const Grid1D pg_coarse(pg.lo(), pg.hi(), 64);
  const auto rho_c_coarse = build_gaussian_mixture(xg, pg_coarse, std::span<const GaussianComponent>(&g, 1));

  Table1Report rep;
  auto& res = rep.result;
  res.name = "table1";
  res.inputs = {{"epsilon", eps},           {"mean", p.mean}, {"sigma_x", p.sigma_x}, {"hbar", p.hbar},
                {"sigma_Q", p.sigma_Q},     {"tau", p.tau},   {"dtau", p.dtau},       {"x_n", double(xg.size())},
                {"p_n", double(pg.size())}, {"Q_n", double(Qg.size())}};

  const auto ptr_q = qm::pointer_distribution(rho_q, obs_q, probe, coupling, Qg);
  const auto ptr_c = cm::probe_marginal_Q(rho_c_coarse, probe, pos, coupling, Qg);
  const auto mq = moments(Qg, ptr_q), mc = moments(Qg, ptr_c);

  // Row 1: <Q>' = eps <A>.
  const std::vector<double> born = born_weights(rho_q, obs_q);
  double mean_a = 0.0, second_a = 0.0;
  for (std::size_t n = 0; n < born.size(); ++n) {
    mean_a += born[n] * obs_q.eigenvalues()[n];
    second_a += born[n] * obs_q.eigenvalues()[n] * obs_q.eigenvalues()[n];
  }
  const auto qmarg = moments(xg, marginal(rho_c_coarse, Axis::Q));
  {
    Table1Row row{"expectation", "pointer mean tracks the observable mean", {}, {}};
    row.qm = make_check("row1_qm", "<Q>' vs eps Tr(rho A)", mq.mean, eps * mean_a, 1e-8, Comparison::AbsDiff,
                        "trace oracle", tol);
    row.cm = make_check("row1_cm", "<Q>' vs eps int rho A", mc.mean, eps * qmarg.mean, 1e-8, Comparison::AbsDiff,
                        "quadrature oracle", tol);
    rep.rows.push_back(row);
  }

  // Row 2: the pointer spread in excess of the state's spread is sigma_Q / eps.
  {
    const double var_a_q = second_a - mean_a * mean_a;
    Table1Row row{"uncertainty", "resolution scale sigma_Q / eps", {}, {}};
    row.qm = make_check("row2_qm", "sqrt(var Q' - eps^2 var A) / eps", std::sqrt(mq.variance - eps * eps * var_a_q) / eps,
                        p.sigma_Q / eps, 1e-6, Comparison::AbsDiff, "variance addition", tol);
    row.cm = make_check("row2_cm", "sqrt(var Q' - eps^2 var A) / eps",
                        std::sqrt(mc.variance - eps * eps * qmarg.variance) / eps, p.sigma_Q / eps, 1e-6,
                        Comparison::AbsDiff, "variance addition", tol);
    rep.rows.push_back(row);
  }

  // Row 3: momentum variance s^2 + 2 tau after either channel.
  const qm::WignerEvolutionSpec lin{[](double x) { return x; }, p.tau};
  {
    const auto w = qm::evolved_wigner(rho_q, lin, pg, p.hbar);
    const auto post_c = cm::reduced_state_post_cm(rho_c, pos, p.tau);
    const double expected = s * s + 2.0 * p.tau;
    Table1Row row{"reduced_state", "final reduced state: momentum diffusion", {}, {}};
    row.qm = make_check("row3_qm", "p variance of the evolved Wigner function", moments(pg, w.p_marginal()).variance,
                        expected, 1e-4, Comparison::AbsDiff, "variance-addition oracle", tol);
    row.cm = make_check("row3_cm", "p variance of exp(tau A_op^2) rho", moments(pg, marginal(post_c, Axis::P)).variance,
                        expected, 1e-4, Comparison::AbsDiff, "variance-addition oracle", tol);
    rep.rows.push_back(row);

    const auto k0 = qm::decoherence_kernel(obs_q, CouplingParams::from_tau(eps, 0.0), p.hbar);
    res.checks.push_back(make_check("row3_qm_identity", "max |rho'(tau = 0) - rho|",
                                    max_abs_difference(qm::reduced_state_post(rho_q, obs_q, k0).matrix(), rho_q.matrix()),
                                    0.0, 1e-14, Comparison::AtMost, "analytic", tol));
    res.checks.push_back(make_check("row3_cm_identity", "max |rho'(tau = 0) - rho|",
                                    max_abs(cm::reduced_state_post_cm(rho_c, pos, 0.0).values() - rho_c.values()), 0.0,
                                    1e-14, Comparison::AtMost, "analytic", tol));
  }

  // Row 4: centered differences of the channels against their generators.
  {
    const double t = std::max(p.tau, p.dtau), dt = p.dtau;
    const Eigen::MatrixXcd r0 = qm::lindblad_evolve(rho_q.matrix(), a_mat, t, p.hbar);
    const Eigen::MatrixXcd fd_q = (qm::lindblad_evolve(rho_q.matrix(), a_mat, t + dt, p.hbar) -
                                   qm::lindblad_evolve(rho_q.matrix(), a_mat, t - dt, p.hbar)) /
                                  (2.0 * dt);
    const Eigen::MatrixXcd rhs_q = qm::lindblad_rhs(r0, a_mat, p.hbar);
    const double err_q = (fd_q - rhs_q).norm() / rhs_q.norm();

    const auto c0 = cm::reduced_state_post_cm(rho_c, pos, t);
    const RealField fd_c = (cm::reduced_state_post_cm(rho_c, pos, t + dt).values() -
                            cm::reduced_state_post_cm(rho_c, pos, t - dt).values()) /
                           (2.0 * dt);
    const RealField rhs_c = cm::cm_diffusion_rhs(c0, pos);
    const double err_c = max_abs(fd_c - rhs_c) / max_abs(rhs_c);
    const double h = pg.spacing();

    Table1Row row{"diffusion", "diffusion equation: channel derivative vs generator", {}, {}};
    row.qm = make_check("row4_qm", "relative error of d rho'/d tau vs -[A,[A,rho']]/hbar^2", err_q, 0.0, 10.0 * dt,
                        Comparison::AtMost, "finite difference", tol);
    row.cm = make_check("row4_cm", "relative error of d rho'/d tau vs {A,{A,rho'}}", err_c, 0.0, 10.0 * dt + h * h,
                        Comparison::AtMost, "finite difference", tol);
    rep.rows.push_back(row);
  }

  std::vector<scenarios::Check> flat;
  for (const auto& row : rep.rows) {
    flat.push_back(row.qm);
    flat.push_back(row.cm);
  }
  flat.insert(flat.end(), res.checks.begin(), res.checks.end());
  res.checks = std::move(flat);

  scenarios::Series ptr;
  ptr.name = "pointer";
  ptr.axis = "Q";
  ptr.axis_units = "pointer";
  ptr.value_units = "1/pointer";
  ptr.axis_values = Qg.nodes();
  ptr.column_names = {"qm", "cm"};
  ptr.columns = {ptr_q, ptr_c};
  res.series.push_back(std::move(ptr));
  return rep;
}

}  // namespace vnm::report
