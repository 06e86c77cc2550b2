// Serial reference kernels against the OpenMP versions, at matched sizes.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "vnm/density_operator.hpp"
#include "vnm/grid.hpp"
#include "vnm/kernels.hpp"
#include "vnm/random.hpp"

using namespace vnm;
namespace k = vnm::kernels;

namespace {

struct WignerCase {
  Eigen::MatrixXcd rho;
  std::vector<double> p, a;
  double h;
};

WignerCase wigner_case(std::size_t n) {
  const Grid1D x(-8.0, 8.0, n);
  WignerCase c{gaussian_density_operator(x, 0.3, 1.0, 0.8).matrix(), Grid1D(-8.0, 8.0, n).nodes(), x.nodes(),
               x.spacing()};
  return c;
}

template <k::WignerOut (*F)(const k::WignerArgs&)>
void BM_wigner(benchmark::State& state) {
  const auto c = wigner_case(static_cast<std::size_t>(state.range(0)));
  const k::WignerArgs args{&c.rho, c.h, c.p, 1.0, c.a, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(F(args));
}

template <void (*F)(RealField&, double, std::span<const double>, double)>
void BM_diffuse_rows(benchmark::State& state) {
  const auto n = state.range(0);
  RealField base(n, n);
  const Grid1D g(-8.0, 8.0, static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) base(i, j) = std::exp(-0.5 * g.node(j) * g.node(j) - 0.1 * g.node(i) * g.node(i));
  const std::vector<double> rate(static_cast<std::size_t>(n), 1.0);
  for (auto _ : state) {
    RealField rows = base;
    F(rows, g.spacing(), rate, 0.3);
    benchmark::DoNotOptimize(rows.data());
  }
}

template <std::vector<double> (*F)(RealField&, std::span<const double>, double, std::size_t)>
void BM_damp_angle_modes(benchmark::State& state) {
  const auto n = state.range(0);
  RealField base(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      base(i, j) = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  const std::vector<double> rate(static_cast<std::size_t>(n), 0.5);
  for (auto _ : state) {
    RealField rows = base;
    benchmark::DoNotOptimize(F(rows, rate, 0.3, static_cast<std::size_t>(n / 2)));
  }
}

template <std::vector<double> (*F)(const RealField&, const RealField&, double, double, std::span<const double>)>
void BM_probe_marginal(benchmark::State& state) {
  const auto n = state.range(0);
  const Grid1D g(-6.0, 6.0, static_cast<std::size_t>(n));
  RealField w(n, n), a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = std::exp(-0.5 * (g.node(i) * g.node(i) + g.node(j) * g.node(j)));
      a(i, j) = g.node(i);
    }
  const auto Q = Grid1D(-8.0, 8.0, 512).nodes();
  for (auto _ : state) benchmark::DoNotOptimize(F(w, a, 1.0, 0.3, Q));
}

template <void (*F)(std::span<k::PhasePoint>, double)>
void BM_flow_position(benchmark::State& state) {
  CounterRng rng(1, 0);
  std::vector<k::PhasePoint> base(static_cast<std::size_t>(state.range(0)));
  for (auto& p : base) p = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  for (auto _ : state) {
    auto pts = base;
    F(pts, 1.0);
    benchmark::DoNotOptimize(pts.data());
  }
}

}  // namespace

BENCHMARK(BM_wigner<k::serial::wigner>)->Name("wigner/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_wigner<k::parallel::wigner>)->Name("wigner/parallel")->Arg(128)->Arg(256);
BENCHMARK(BM_diffuse_rows<k::serial::diffuse_rows>)->Name("diffuse_rows/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_diffuse_rows<k::parallel::diffuse_rows>)->Name("diffuse_rows/parallel")->Arg(128)->Arg(256);
BENCHMARK(BM_damp_angle_modes<k::serial::damp_angle_modes>)->Name("damp_angle_modes/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_damp_angle_modes<k::parallel::damp_angle_modes>)->Name("damp_angle_modes/parallel")->Arg(128)->Arg(256);
BENCHMARK(BM_probe_marginal<k::serial::probe_marginal>)->Name("probe_marginal/serial")->Arg(64)->Arg(128);
BENCHMARK(BM_probe_marginal<k::parallel::probe_marginal>)->Name("probe_marginal/parallel")->Arg(64)->Arg(128);
BENCHMARK(BM_flow_position<k::serial::flow_position>)->Name("flow_position/serial")->Arg(100000);
BENCHMARK(BM_flow_position<k::parallel::flow_position>)->Name("flow_position/parallel")->Arg(100000);

BENCHMARK_MAIN();
