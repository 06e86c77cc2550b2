#include "vnm/qm/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../fft.hpp"
#include "vnm/error.hpp"
#include "vnm/kernels.hpp"

namespace vnm::qm {

WignerFunction::WignerFunction(Grid1D qgrid, Grid1D pgrid, RealField values, double hbar, double max_imag)
    : qgrid_(qgrid), pgrid_(pgrid), values_(std::move(values)), hbar_(hbar), max_imag_(max_imag) {
  require(static_cast<std::size_t>(values_.rows()) == qgrid_.size() &&
              static_cast<std::size_t>(values_.cols()) == pgrid_.size(),
          ErrorCode::ShapeMismatch, "Wigner values do not match the (q, p) grid");
}

PhaseSpaceDensity WignerFunction::as_phase_density() const {
  return PhaseSpaceDensity(qgrid_, pgrid_, values_ / (2.0 * std::numbers::pi * hbar_));
}

double WignerFunction::normalization() const { return as_phase_density().mass(); }

std::vector<double> WignerFunction::p_marginal() const { return marginal(as_phase_density(), Axis::P); }

std::vector<double> WignerFunction::q_marginal() const { return marginal(as_phase_density(), Axis::Q); }

namespace {

WignerFunction transform(const DensityOperator& rho, const Grid1D& pgrid, double hbar, const WignerEvolutionSpec* spec) {
  require(rho.on_position_grid(), ErrorCode::BasisMismatch, "Wigner transform needs a position-grid state");
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be positive");
  const auto& g = rho.grid();
  const auto ps = pgrid.nodes();
  std::vector<double> a;
  kernels::WignerArgs args;
  args.rho = &rho.matrix();
  args.h = g.spacing();
  args.pnodes = ps;
  args.hbar = hbar;
  if (spec != nullptr && spec->tau != 0.0) {
    require(static_cast<bool>(spec->A), ErrorCode::InvalidArgument, "evolution spec needs A(x)");
    a.resize(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = spec->A(g.node(i));
    args.a_nodes = a;
    args.rate = spec->tau / (hbar * hbar);
  }
  auto out = kernels::parallel::wigner(args);
  return WignerFunction(g, pgrid, std::move(out.values), hbar, out.max_imag);
}

}  // namespace

WignerFunction wigner_transform(const DensityOperator& rho, const Grid1D& pgrid, double hbar) {
  return transform(rho, pgrid, hbar, nullptr);
}

WignerFunction evolved_wigner(const DensityOperator& rho, const WignerEvolutionSpec& spec, const Grid1D& pgrid,
                              double hbar) {
  require(spec.tau >= 0.0, ErrorCode::InvalidArgument, "tau must be non-negative");
  return transform(rho, pgrid, hbar, &spec);
}

RealField wigner_pde_rhs(const WignerFunction& w, const WignerEvolutionSpec& spec) {
  require(static_cast<bool>(spec.A), ErrorCode::InvalidArgument, "evolution spec needs A(x)");
  const auto& qg = w.qgrid();
  const auto& pg = w.pgrid();
  const auto n = pg.size();
  const double hbar = w.hbar();
  // Each p row is treated as one period of length n * dp; the Fourier dual of
  // p is y = hbar k, where the operator is multiplication by -DeltaA^2 / hbar^2.
  const vnm::detail::RealFft fft(n);
  std::vector<double> k(fft.spectrum_size());
  for (std::size_t m = 0; m < k.size(); ++m)
    k[m] = 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * pg.spacing());
  RealField out(w.values().rows(), w.values().cols());
#pragma omp parallel
  {
    std::vector<double> buf(n);
    std::vector<std::complex<double>> spec_row(fft.spectrum_size());
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double q = qg.node(static_cast<std::size_t>(i));
      for (std::size_t j = 0; j < n; ++j) buf[j] = w.values()(i, static_cast<Eigen::Index>(j));
      fft.forward(buf.data(), spec_row.data());
      for (std::size_t m = 0; m < spec_row.size(); ++m) {
        const double da = spec.delta_A(q, hbar * k[m]);
        spec_row[m] *= -da * da / (hbar * hbar);
      }
      // The Nyquist bin of an even-length row has no sine partner.
      if (n % 2 == 0) spec_row.back() = spec_row.back().real();
      fft.inverse(spec_row.data(), buf.data());
      for (std::size_t j = 0; j < n; ++j) out(i, static_cast<Eigen::Index>(j)) = buf[j] / static_cast<double>(n);
    }
  }
  return out;
}

double wigner_pde_residual(std::span<const WignerFunction> series, std::span<const double> taus,
                           const WignerEvolutionSpec& spec, TauDifference scheme) {
  require(series.size() >= 3, ErrorCode::InsufficientSamples, "residual needs at least 3 tau samples");
  require(series.size() == taus.size(), ErrorCode::ShapeMismatch, "one tau per Wigner sample required");
  const double dt = taus[1] - taus[0];
  require(dt > 0.0, ErrorCode::InvalidArgument, "tau samples must increase");
  for (std::size_t i = 1; i < taus.size(); ++i)
    require(std::fabs((taus[i] - taus[i - 1]) - dt) <= 1e-9 * std::max(1.0, std::fabs(dt)), ErrorCode::InvalidArgument,
            "tau samples must be uniformly spaced");
  double worst = 0.0;
  if (scheme == TauDifference::Centered) {
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
      const RealField fd = (series[i + 1].values() - series[i - 1].values()) / (2.0 * dt);
      worst = std::max(worst, (fd - wigner_pde_rhs(series[i], spec)).cwiseAbs().maxCoeff());
    }
  } else {
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
      const RealField fd = (series[i + 1].values() - series[i].values()) / dt;
      worst = std::max(worst, (fd - wigner_pde_rhs(series[i], spec)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace vnm::qm
