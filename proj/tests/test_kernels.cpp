#include <cmath>

#include "doctest.h"
#include "vnm/kernels.hpp"
#include "vnm/random.hpp"

using namespace vnm;

namespace {

RealField random_rows(Eigen::Index r, Eigen::Index c, CounterRng& rng) {
  RealField m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform();
  return m;
}

}  // namespace

TEST_CASE("wigner kernels agree") {
  CounterRng rng(3, 0);
  const Eigen::MatrixXcd rho = random_density_matrix(48, 4, rng);
  std::vector<double> ps(37), a(48);
  for (std::size_t j = 0; j < ps.size(); ++j) ps[j] = -4.0 + 0.2 * static_cast<double>(j);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::sin(0.1 * static_cast<double>(i));
  kernels::WignerArgs args;
  args.rho = &rho;
  args.h = 0.15;
  args.pnodes = ps;
  for (bool damped : {false, true}) {
    if (damped) {
      args.a_nodes = a;
      args.rate = 2.5;
    }
    const auto s = kernels::serial::wigner(args);
    const auto p = kernels::parallel::wigner(args);
    CHECK((s.values - p.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::fabs(s.max_imag - p.max_imag) < 1e-12);
  }
}

TEST_CASE("row diffusion kernels agree") {
  CounterRng rng(4, 0);
  RealField a = random_rows(6, 70, rng);
  RealField b = a;
  const std::vector<double> rate = {1.0, 0.0, 0.5, 2.0, 1.0, 0.1};
  kernels::serial::diffuse_rows(a, 0.1, rate, 0.03);
  kernels::parallel::diffuse_rows(b, 0.1, rate, 0.03);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("angle damping kernels agree") {
  CounterRng rng(5, 0);
  for (Eigen::Index n : {64, 65}) {
    RealField a = random_rows(5, n, rng);
    RealField b = a;
    const std::vector<double> rate = {0.0, 1.0, 0.3, 2.0, 0.7};
    const auto da = kernels::serial::damp_angle_modes(a, rate, 0.2, 20);
    const auto db = kernels::parallel::damp_angle_modes(b, rate, 0.2, 20);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(std::fabs(da[i] - db[i]) < 1e-12);
  }
}

TEST_CASE("probe marginal and tabulation kernels agree") {
  CounterRng rng(6, 0);
  const RealField w = random_rows(20, 30, rng);
  const RealField a = random_rows(20, 30, rng);
  std::vector<double> Q(41);
  for (std::size_t k = 0; k < Q.size(); ++k) Q[k] = -1.0 + 0.1 * static_cast<double>(k);
  const auto s = kernels::serial::probe_marginal(w, a, 1.7, 0.3, Q);
  const auto p = kernels::parallel::probe_marginal(w, a, 1.7, 0.3, Q);
  for (std::size_t k = 0; k < Q.size(); ++k) CHECK(std::fabs(s[k] - p[k]) < 1e-12);

  const auto f = [](double x, double y) { return std::cos(x) * y; };
  const std::vector<double> xs = {0.0, 0.5, 1.0}, ys = {1.0, 2.0};
  CHECK(kernels::serial::tabulate(xs, ys, f) == kernels::parallel::tabulate(xs, ys, f));
}

TEST_CASE("flow kernels agree bitwise") {
  CounterRng rng(8, 0);
  std::vector<kernels::PhasePoint> a(500);
  std::vector<kernels::ActionPoint> c(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    c[i] = {rng.uniform() * 5.0, rng.uniform() * 6.0, rng.normal(), rng.normal()};
  }
  auto b = a;
  auto d = c;
  kernels::serial::flow_position(a, 0.7);
  kernels::parallel::flow_position(b, 0.7);
  const auto A = [](double x) { return x * x; };
  const auto dA = [](double x) { return 2.0 * x; };
  kernels::serial::flow_action(c, 0.7, A, dA);
  kernels::parallel::flow_action(d, 0.7, A, dA);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p == b[i].p);
    CHECK(a[i].Q == b[i].Q);
    CHECK(c[i].theta == d[i].theta);
    CHECK(c[i].Qbar == d[i].Qbar);
  }
}
