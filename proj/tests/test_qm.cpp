#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "vnm/error.hpp"
#include "vnm/qm/measurement.hpp"
#include "vnm/qm/wigner.hpp"
#include "vnm/random.hpp"

using namespace vnm;
using namespace vnm::qm;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidState;
}

DensityOperator two_level(const Eigen::Matrix2cd& m) { return DensityOperator(NumberBasis{2}, m); }

SpectralObservable diag01() {
  const std::vector<double> a = {0.0, 1.0};
  return SpectralObservable::diagonal(a);
}

int local_maxima(const std::vector<double>& f) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    if (f[i] > f[i - 1] && f[i] >= f[i + 1]) ++count;
  return count;
}

// Random state and observable of a random dimension in [2, 6].
struct RandomCase {
  Eigen::MatrixXcd rho;
  SpectralObservable obs;
};

RandomCase random_case(std::uint64_t i) {
  CounterRng rng(1234, i);
  const auto dim = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
  std::vector<double> eig(dim);
  for (auto& e : eig) e = 2.0 * rng.uniform() - 1.0;
  if (dim > 2) eig[1] = eig[0];  // one degenerate pair
  const auto a = random_hermitian(eig, rng);
  return {random_density_matrix(dim, 1 + static_cast<std::size_t>(rng.uniform() * dim), rng),
          SpectralObservable::from_matrix(a)};
}

Eigen::VectorXcd ground_state(const Grid1D& g, double shift = 0.0) {
  Eigen::VectorXcd psi(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.node(i) - shift;
    psi(i) = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  }
  return discretize_wavefunction(g, psi);
}

}  // namespace

TEST_CASE("pointer distribution") {
  const Grid1D Q(-20.0, 22.0, 4201);
  SUBCASE("eigenstate gives a single Gaussian") {
    const std::vector<double> a = {-1.0, 2.0};
    const auto obs = SpectralObservable::diagonal(a);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 1) = 1.0;
    const ProbeSpec probe{0.1, 0.0};
    const auto p = pointer_distribution(two_level(m), obs, probe, CouplingParams::from_probe(1.0, probe), Q);
    for (std::size_t k = 0; k < Q.size(); k += 50) CHECK(std::fabs(p[k] - oracle::normal_pdf(Q.node(k) - 2.0, 0.1)) < 1e-12);
  }
  SUBCASE("two levels resolved or merged") {
    const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() * 0.5;
    for (double s : {0.05, 2.0}) {
      const ProbeSpec probe{s, 0.0};
      const auto p = pointer_distribution(two_level(m), diag01(), probe, CouplingParams::from_probe(1.0, probe), Q);
      CHECK(std::fabs(trapezoid(Q, p) - 1.0) < 1e-8);
      if (s < 1.0) {
        CHECK(local_maxima(p) == 2);
        const double valley = p[static_cast<std::size_t>((0.5 - Q.lo()) / Q.spacing())];
        const double peak = p[static_cast<std::size_t>((0.0 - Q.lo()) / Q.spacing())];
        CHECK(valley / peak < 0.1);
      } else {
        CHECK(local_maxima(p) == 1);
      }
    }
  }
}

TEST_CASE("pointer mean") {
  const Eigen::Matrix2cd mixed = Eigen::Matrix2cd::Identity() * 0.5;
  const auto c = CouplingParams::from_tau(2.0, 0.0);
  CHECK(std::fabs(pointer_mean(two_level(mixed), diag01(), c) - 1.0) < 1e-15);
  Eigen::Matrix2cd ground = Eigen::Matrix2cd::Zero();
  ground(0, 0) = 1.0;
  CHECK(pointer_mean(two_level(ground), diag01(), c) == 0.0);

  // First moment of the sampled distribution.
  const Grid1D Q(-15.0, 15.0, 6001);
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rc = random_case(i);
    const DensityOperator rho(NumberBasis{rc.obs.dim()}, rc.rho);
    const ProbeSpec probe{0.4, 0.3};
    const auto cp = CouplingParams::from_probe(1.5, probe);
    const auto p = pointer_distribution(rho, rc.obs, probe, cp, Q);
    std::vector<double> qp(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) qp[k] = Q.node(k) * p[k];
    CHECK(std::fabs(trapezoid(Q, qp) - pointer_mean(rho, rc.obs, cp)) < 1e-8);
  }
}

TEST_CASE("decoherence kernel") {
  const std::vector<double> a = {0.0, 1.0, 3.0};
  const auto obs = SpectralObservable::diagonal(a);
  const auto k0 = decoherence_kernel(obs, CouplingParams::from_tau(1.0, 0.0));
  CHECK(k0.g().minCoeff() == 1.0);

  // tau / hbar^2 = 1 with eps = 1, sigma_P = sqrt(2).
  const ProbeSpec probe{1.0, std::sqrt(2.0)};
  const auto cp = CouplingParams::from_probe(1.0, probe);
  const auto k = decoherence_kernel(obs, cp);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(k(m, m) == 1.0);
    for (std::size_t n = 0; n < 3; ++n) {
      CHECK(k(m, n) == k(n, m));
      const double da = a[m] - a[n];
      const double quad = oracle::simpson(
          [&](double P) { return oracle::normal_pdf(P, std::sqrt(2.0)) * std::cos(da * P); }, -60.0, 60.0, 60000);
      CHECK(std::fabs(k(m, n) - quad) < 1e-10);
      CHECK(std::fabs(k(m, n) - std::exp(-da * da)) < 1e-14);
    }
  }
  CHECK(std::fabs(k(0, 1) - 0.36787944117144233) < 1e-10);
}

TEST_CASE("reduced state post measurement") {
  SUBCASE("commuting state is unchanged") {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 0.3;
    m(1, 1) = 0.7;
    const auto k = decoherence_kernel(diag01(), CouplingParams::from_tau(1.0, 2.0));
    CHECK(max_abs_difference(reduced_state_post(two_level(m), diag01(), k).matrix(), m) < 1e-12);
  }
  SUBCASE("off-diagonal damped by e^-1") {
    Eigen::Matrix2cd m;
    m << 0.5, cd(0.2, 0.1), cd(0.2, -0.1), 0.5;
    const auto k = decoherence_kernel(diag01(), CouplingParams::from_tau(1.0, 1.0));
    const auto out = reduced_state_post(two_level(m), diag01(), k).matrix();
    CHECK(std::abs(out(0, 1) - cd(0.2, 0.1) * std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(out(0, 0) - 0.5) < 1e-15);
  }
  SUBCASE("strong coupling reaches the Lueders state") {
    for (std::uint64_t i = 0; i < 20; ++i) {
      auto rc = random_case(i);
      const DensityOperator rho(NumberBasis{rc.obs.dim()}, rc.rho);
      const double gap = rc.obs.min_gap();
      const auto k = decoherence_kernel(rc.obs, CouplingParams::from_tau(1.0, 50.0 / (gap * gap)));
      const auto out = reduced_state_post(rho, rc.obs, k);
      CHECK(max_abs_difference(out.matrix(), lueders_nonselective(rho, rc.obs).matrix()) < std::exp(-30.0) + 1e-12);
      const Eigen::MatrixXcd e = rc.obs.to_eigenbasis(out.matrix());
      for (Eigen::Index a = 0; a < e.rows(); ++a)
        for (Eigen::Index b = 0; b < e.cols(); ++b)
          if (rc.obs.block_of()[a] != rc.obs.block_of()[b]) CHECK(std::abs(e(a, b)) <= std::exp(-50.0) + 1e-15);
    }
  }
  SUBCASE("kernel size must match") {
    const std::vector<double> a = {0.0, 1.0, 2.0};
    const auto k = decoherence_kernel(SpectralObservable::diagonal(a), CouplingParams::from_tau(1.0, 1.0));
    CHECK(code_of([&] { reduced_state_post(two_level(Eigen::Matrix2cd::Identity() * 0.5), diag01(), k); }) ==
          ErrorCode::KernelMismatch);
  }
  SUBCASE("zero probe momentum width is the identity channel") {
    CounterRng rng(3, 1);
    const Eigen::MatrixXcd r = random_density_matrix(2, 2, rng);
    const ProbeSpec probe{0.5, 0.0};
    const auto k = decoherence_kernel(diag01(), CouplingParams::from_probe(3.0, probe));
    CHECK(max_abs_difference(reduced_state_post(DensityOperator(NumberBasis{2}, r), diag01(), k).matrix(), r) <= 1e-14);
  }
}

TEST_CASE("channel properties on random inputs") {
  double herm = 0.0, trace = 0.0, neg = 0.0, block = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto rc = random_case(i);
    CounterRng rng(99, i);
    const double tau = 3.0 * rng.uniform();
    const DensityOperator rho(NumberBasis{rc.obs.dim()}, rc.rho);
    const auto k = decoherence_kernel(rc.obs, CouplingParams::from_tau(1.0, tau));
    for (const auto& out : {reduced_state_post(rho, rc.obs, k), lindblad_evolve(rho, rc.obs.matrix(), tau)}) {
      const auto c = check_operator(out);
      herm = std::max(herm, c.hermiticity);
      trace = std::max(trace, c.trace_error);
      neg = std::max(neg, -c.min_eigenvalue);
      const auto w0 = born_weights(rho, rc.obs);
      const auto w1 = born_weights(out, rc.obs);
      for (std::size_t n = 0; n < w0.size(); ++n) block = std::max(block, std::fabs(w1[n] - w0[n]));
    }
  }
  CHECK(herm <= 1e-12);
  CHECK(trace <= 1e-10);
  CHECK(neg <= 1e-10);
  CHECK(block <= 1e-10);
}

TEST_CASE("Lueders pinching") {
  Eigen::Matrix2cd plus = Eigen::Matrix2cd::Constant(0.5);
  const auto out = lueders_nonselective(two_level(plus), diag01()).matrix();
  CHECK(max_abs_difference(out, Eigen::Matrix2cd::Identity() * 0.5) < 1e-15);
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rc = random_case(i);
    const DensityOperator rho(NumberBasis{rc.obs.dim()}, rc.rho);
    const auto once = lueders_nonselective(rho, rc.obs);
    const auto twice = lueders_nonselective(once, rc.obs);
    CHECK(max_abs_difference(once.matrix(), twice.matrix()) < 1e-14);
  }
}

TEST_CASE("Lindblad channel") {
  CounterRng rng(17, 0);
  const std::vector<double> eig = {-1.0, -0.2, 0.4, 1.0};
  const Eigen::MatrixXcd a = random_hermitian(eig, rng);
  const Eigen::MatrixXcd rho = random_density_matrix(4, 3, rng);
  CHECK(max_abs_difference(lindblad_evolve(rho, a, 0.0), rho) == 0.0);
  const auto semi = lindblad_evolve(lindblad_evolve(rho, a, 0.3), a, 0.45);
  CHECK(max_abs_difference(semi, lindblad_evolve(rho, a, 0.75)) < 1e-12);

  const auto obs = SpectralObservable::from_matrix(a);
  const Eigen::MatrixXcd pinched = lueders_nonselective(DensityOperator(NumberBasis{4}, rho), obs).matrix();
  CHECK(lindblad_rhs(pinched, a).cwiseAbs().maxCoeff() < 1e-14);

  const double dt = 1e-4;
  for (double tau : {0.0, 0.2, 1.0}) {
    const Eigen::MatrixXcd r0 = lindblad_evolve(rho, a, tau);
    const Eigen::MatrixXcd rhs = lindblad_rhs(r0, a);
    const Eigen::MatrixXcd fwd = (lindblad_evolve(rho, a, tau + dt) - r0) / dt;
    CHECK((fwd - rhs).norm() / rhs.norm() <= 10.0 * dt);
    if (tau > 0.0) {
      const Eigen::MatrixXcd ctr = (lindblad_evolve(rho, a, tau + dt) - lindblad_evolve(rho, a, tau - dt)) / (2.0 * dt);
      // Roundoff in the difference quotient is ~1e-16 / dt.
      CHECK((ctr - rhs).norm() / rhs.norm() <= 10.0 * dt * dt + 1e-10);
    }
  }
  Eigen::MatrixXcd nh = a;
  nh(0, 1) += 0.5;
  CHECK(code_of([&] { lindblad_evolve(rho, nh, 0.1); }) == ErrorCode::NonHermitianObservable);
  CHECK(code_of([&] { lindblad_rhs(rho, nh); }) == ErrorCode::NonHermitianObservable);
}

TEST_CASE("conditional state") {
  SUBCASE("single eigenvalue leaves the state alone") {
    const std::vector<double> a = {1.0, 1.0, 1.0};
    const auto obs = SpectralObservable::diagonal(a);
    CounterRng rng(2, 2);
    const Eigen::MatrixXcd r = random_density_matrix(3, 2, rng);
    const ProbeSpec probe{0.3, 0.0};
    const auto out = conditional_state(DensityOperator(NumberBasis{3}, r), obs, probe, CouplingParams::from_tau(1.0, 0.0), 1.2);
    CHECK(max_abs_difference(out.matrix(), r) < 1e-12);
  }
  SUBCASE("narrow probe collapses onto the eigenvector") {
    const Eigen::Matrix2cd plus = Eigen::Matrix2cd::Constant(0.5);
    const ProbeSpec probe{0.01, 0.0};
    const auto out = conditional_state(two_level(plus), diag01(), probe, CouplingParams::from_tau(1.0, 0.0), 1.0);
    Eigen::Matrix2cd one = Eigen::Matrix2cd::Zero();
    one(1, 1) = 1.0;
    CHECK(trace_distance(out.matrix(), one) < 1e-3);
  }
  SUBCASE("matches the quadrature of the probe wavefunction") {
    // chi(Q) from the Fourier integral of a minimum-uncertainty momentum amplitude.
    const double sQ = 0.8, sP = 1.0 / (2.0 * sQ);
    const auto chi = [&](double Q) {
      return oracle::simpson(
                 [&](double P) {
                   return std::pow(2.0 * pi * sP * sP, -0.25) * std::exp(-P * P / (4.0 * sP * sP)) * std::cos(P * Q);
                 },
                 -20.0 * sP, 20.0 * sP, 20000) /
             std::sqrt(2.0 * pi);
    };
    Eigen::Matrix2cd m;
    m << 0.6, cd(0.1, 0.3), cd(0.1, -0.3), 0.4;
    const double eps = 1.0, Q = 0.3;
    Eigen::Matrix2cd ref;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ref(i, j) = m(i, j) * chi(Q - eps * i) * chi(Q - eps * j);
    ref /= ref.trace();
    const ProbeSpec probe{sQ, 0.0};
    const auto out = conditional_state(two_level(m), diag01(), probe, CouplingParams::from_tau(eps, 0.0), Q);
    CHECK(max_abs_difference(out.matrix(), ref) < 1e-10);

    const ProbeSpec wide{10.0, 0.0};
    const auto weak = conditional_state(two_level(m), diag01(), wide, CouplingParams::from_tau(eps, 0.0), Q);
    CHECK(trace_distance(weak.matrix(), m) < 0.01);
  }
  SUBCASE("impossible outcome") {
    const ProbeSpec probe{0.01, 0.0};
    CHECK(code_of([&] {
            conditional_state(two_level(Eigen::Matrix2cd::Identity() * 0.5), diag01(), probe,
                              CouplingParams::from_tau(1.0, 0.0), 40.0);
          }) == ErrorCode::NegligibleProbability);
  }
}

TEST_CASE("Wigner transform") {
  const Grid1D x(-8.0, 8.0, 256);
  const Grid1D p(-6.0, 6.0, 121);
  const auto rho = pure_state(PositionBasis{x}, ground_state(x));
  const auto w = wigner_transform(rho, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double q = x.node(i), pp = p.node(j);
      worst = std::max(worst, std::fabs(w.values()(i, j) - 2.0 * std::exp(-(q * q + pp * pp))));
    }
  CHECK(worst < 1e-4);
  CHECK(std::fabs(w.normalization() - 1.0) < 1e-6);
  CHECK(w.max_imag_residue() <= 1e-10);

  const auto other = pure_state(PositionBasis{x}, ground_state(x, 1.5));
  const auto wm = wigner_transform(mix(0.5, rho, 0.5, other), p);
  const auto w2 = wigner_transform(other, p);
  CHECK((wm.values() - 0.5 * (w.values() + w2.values())).cwiseAbs().maxCoeff() < 1e-12);

  CounterRng rng(1, 1);
  const DensityOperator random(PositionBasis{Grid1D(-4.0, 4.0, 40)}, random_density_matrix(40, 3, rng));
  const auto wr = wigner_transform(random, Grid1D(-9.0, 9.0, 181));
  CHECK(wr.max_imag_residue() <= 1e-10);

  const DensityOperator num(NumberBasis{2}, Eigen::MatrixXcd::Identity(2, 2) * 0.5);
  CHECK(code_of([&] { wigner_transform(num, p); }) == ErrorCode::BasisMismatch);
}

TEST_CASE("evolved Wigner function") {
  const Grid1D x(-8.0, 8.0, 256);
  const auto rho = gaussian_density_operator(x, 0.0, 1.0, 1.0);
  const WignerEvolutionSpec lin{[](double q) { return q; }, 0.3};
  const Grid1D p(-10.0, 10.0, 257);

  SUBCASE("zero tau is the plain transform") {
    const WignerEvolutionSpec zero{lin.A, 0.0};
    CHECK(evolved_wigner(rho, zero, p).values() == wigner_transform(rho, p).values());
  }
  SUBCASE("linear A agrees with the discretized position channel") {
    const auto xs = x.nodes();
    const auto obs = SpectralObservable::diagonal(xs);
    const auto k = decoherence_kernel(obs, CouplingParams::from_tau(1.0, lin.tau));
    const auto ref = wigner_transform(reduced_state_post(rho, obs, k), p);
    CHECK((evolved_wigner(rho, lin, p).values() - ref.values()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("momentum variance grows by 2 tau") {
    const auto w = evolved_wigner(rho, lin, p);
    const auto m = w.p_marginal();
    CHECK(std::fabs(moments(p, m).variance - (1.0 + 2.0 * lin.tau)) < 1e-4);
  }
  SUBCASE("strong decoherence flattens the momentum dependence") {
    const double h = x.spacing();
    const WignerEvolutionSpec strong{lin.A, 50.0 / (4.0 * h * h)};
    const auto w = evolved_wigner(rho, strong, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, w.values().row(i).maxCoeff() - w.values().row(i).minCoeff());
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("ΔA is odd in y") {
  const WignerEvolutionSpec s{[](double q) { return std::sin(q) + q * q * q; }, 1.0};
  for (double q : {-1.3, 0.0, 0.7})
    for (double y : {0.1, 0.9, 2.5}) CHECK(s.delta_A(q, -y) == -s.delta_A(q, y));
}

TEST_CASE("Wigner diffusion equation residual") {
  const Grid1D x(-8.0, 8.0, 256);
  const Grid1D p(-8.0, 8.0, 256);
  const auto rho = gaussian_density_operator(x, 0.0, 1.0, 1.0);
  auto series = [&](const WignerEvolutionSpec& base, double t0, double dt, std::size_t n) {
    std::vector<WignerFunction> ws;
    std::vector<double> taus;
    for (std::size_t k = 0; k < n; ++k) {
      taus.push_back(t0 + dt * static_cast<double>(k));
      ws.push_back(evolved_wigner(rho, {base.A, taus.back()}, p));
    }
    return std::pair{ws, taus};
  };
  SUBCASE("linear A is a heat equation in p") {
    const auto [ws, taus] = series({[](double q) { return q; }, 0.0}, 0.2, 1e-3, 3);
    CHECK(wigner_pde_residual(ws, taus, {[](double q) { return q; }, 0.0}) <= 1e-3);
  }
  SUBCASE("constant A gives zero on both sides") {
    const WignerEvolutionSpec c{[](double) { return 2.0; }, 0.0};
    const auto [ws, taus] = series(c, 0.2, 1e-3, 3);
    CHECK(wigner_pde_residual(ws, taus, c) < 1e-12);
  }
  SUBCASE("quadratic A converges at first order in tau") {
    const WignerEvolutionSpec sq{[](double q) { return q * q; }, 0.0};
    const auto [w1, t1] = series(sq, 0.05, 2e-3, 3);
    const auto [w2, t2] = series(sq, 0.05, 1e-3, 3);
    const double r1 = wigner_pde_residual(w1, t1, sq, TauDifference::Forward);
    const double r2 = wigner_pde_residual(w2, t2, sq, TauDifference::Forward);
    MESSAGE("residuals " << r1 << " " << r2);
    CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.15));
  }
  SUBCASE("needs three samples") {
    const auto [ws, taus] = series({[](double q) { return q; }, 0.0}, 0.0, 1e-3, 2);
    CHECK(code_of([&] { wigner_pde_residual(ws, taus, {[](double q) { return q; }, 0.0}); }) ==
          ErrorCode::InsufficientSamples);
  }
}

TEST_CASE("disturbance measure") {
  const Grid1D x(-8.0, 8.0, 200);
  const auto rho = gaussian_density_operator(x, 0.0, 1.5, 1.0);
  const ProbeSpec probe{0.2, 0.4};
  CHECK(disturbance_measure(rho, CouplingParams::from_probe(2.0, probe)) == doctest::Approx(2.0 * 0.4 * 1.5).epsilon(1e-6));
}
