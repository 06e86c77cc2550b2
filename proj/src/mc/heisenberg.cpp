#include "vnm/mc/heisenberg.hpp"

#include <algorithm>
#include <cmath>

#include "vnm/error.hpp"
#include "vnm/random.hpp"

namespace vnm::mc {

namespace {

double bump_shape(double u) noexcept { return std::fabs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

// Position inside [x0, x0 + h] where a linear density from a to b has
// accumulated mass r.
double linear_inverse(double a, double b, double h, double r) noexcept {
  const double slope = (b - a) / h;
  const double disc = std::max(0.0, a * a + 2.0 * slope * r);
  const double denom = a + std::sqrt(disc);
  const double s = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return std::clamp(s, 0.0, h);
}

// Cumulative trapezoid masses of a non-negative sampled density.
std::vector<double> cumulative(std::span<const double> v, double h) {
  std::vector<double> c(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) c[i] = c[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  return c;
}

double sample_piecewise_linear(std::span<const double> v, std::span<const double> cdf, double lo, double h, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  std::size_t k = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
  k = std::min(k, v.size() - 2);
  const double s = linear_inverse(v[k], v[k + 1], h, target - cdf[k]);
  return lo + h * static_cast<double>(k) + s;
}

}  // namespace

CouplingProfile::CouplingProfile(double t1, double half_width, double norm)
    : t1_(t1), half_width_(half_width), norm_(norm) {}

CouplingProfile CouplingProfile::bump(double t1, double half_width) {
  require(half_width > 0.0, ErrorCode::InvalidArgument, "pulse half-width must be positive");
  // The bump is flat to all orders at its ends, so the trapezoid rule converges
  // faster than any power.
  constexpr int n = 4096;
  double s = 0.0;
  for (int k = 1; k < n; ++k) s += bump_shape(-1.0 + 2.0 * k / n);
  return CouplingProfile(t1, half_width, s * (2.0 / n) * half_width);
}

double CouplingProfile::g(double t) const { return bump_shape((t - t1_) / half_width_) / norm_; }

double CouplingProfile::G(double t) const {
  const double lo = t1_ - half_width_;
  if (t <= lo) return 0.0;
  if (t >= t1_ + half_width_) return 1.0;
  constexpr int n = 2048;  // Simpson intervals, even
  const double h = (t - lo) / n;
  double s = g(lo) + g(t);
  for (int k = 1; k < n; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * g(lo + h * k);
  return std::clamp(s * h / 3.0, 0.0, 1.0);
}

TrajectoryEnsemble sample_initial(const PhaseSpaceDensity& rho_s, const ProbeSpec& probe, std::size_t n,
                                  std::uint64_t seed) {
  require(n >= 1, ErrorCode::InvalidArgument, "need at least one sample");
  probe.validate();
  probe.require_independent();
  const auto& qg = rho_s.qgrid();
  const auto& pg = rho_s.pgrid();
  const RealField v = rho_s.values().cwiseMax(0.0);
  const PhaseSpaceDensity clamped(qg, pg, v);
  const auto mq = marginal(clamped, Axis::Q);
  const auto cq = cumulative(mq, qg.spacing());
  require(cq.back() > 0.0, ErrorCode::InvalidState, "density has no mass to sample");
  std::vector<std::vector<double>> rows(qg.size()), row_cdf(qg.size());
  for (std::size_t i = 0; i < qg.size(); ++i) {
    rows[i].resize(pg.size());
    for (std::size_t j = 0; j < pg.size(); ++j) rows[i][j] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    row_cdf[i] = cumulative(rows[i], pg.spacing());
  }
  TrajectoryEnsemble ens;
  ens.seed = seed;
  ens.samples.resize(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    const double q = sample_piecewise_linear(mq, cq, qg.lo(), qg.spacing(), rng.uniform());
    // The bilinear interpolant at q mixes the two neighbouring rows with
    // weights (1 - t) m_i and t m_{i+1}.
    const double u = (q - qg.lo()) / qg.spacing();
    const auto i = std::min(static_cast<std::size_t>(u), qg.size() - 2);
    const double t = u - static_cast<double>(i);
    const double w0 = (1.0 - t) * row_cdf[i].back();
    const double w1 = t * row_cdf[i + 1].back();
    const std::size_t row = rng.uniform() * (w0 + w1) < w0 ? i : i + 1;
    const double p = sample_piecewise_linear(rows[row], row_cdf[row], pg.lo(), pg.spacing(), rng.uniform());
    const double Q = probe.sigma_Q * rng.normal();
    const double P = probe.sigma_P > 0.0 ? probe.sigma_P * rng.normal() : 0.0;
    ens.samples[static_cast<std::size_t>(s)] = {q, p, Q, P};
  }
  return ens;
}

TrajectoryEnsemble flow_position(const TrajectoryEnsemble& ens, const CouplingParams& coupling) {
  TrajectoryEnsemble out = ens;
  kernels::parallel::flow_position(out.samples, coupling.epsilon());
  return out;
}

ActionEnsemble to_action(const TrajectoryEnsemble& ens, const UnitsConfig& units) {
  units.validate();
  const double c = units.scale_C;
  ActionEnsemble out;
  out.seed = ens.seed;
  out.samples.resize(ens.n());
  for (std::size_t i = 0; i < ens.n(); ++i) {
    const auto& s = ens.samples[i];
    const double qb = c * s.q, pb = s.p / c;
    out.samples[i] = {0.5 * (qb * qb + pb * pb), wrap_angle(std::atan2(pb, qb)), s.Q, s.P};
  }
  return out;
}

ActionEnsemble flow_action(const ActionEnsemble& ens, const ClassicalObservable& obs, const CouplingParams& coupling) {
  require(obs.has_action_form(), ErrorCode::UnsupportedObservable, "action flow needs an observable A(xi)");
  ActionEnsemble out = ens;
  kernels::parallel::flow_action(
      out.samples, coupling.epsilon(), [&obs](double xi) { return obs.A_of_xi(xi); },
      [&obs](double xi) { return obs.dA_dxi(xi); });
  return out;
}

kernels::PhasePoint position_trajectory(const kernels::PhasePoint& initial, const CouplingParams& coupling,
                                        const CouplingProfile& profile, double t) {
  const double eg = coupling.epsilon() * profile.G(t);
  return {initial.q, initial.p - eg * initial.P, initial.Q + eg * initial.q, initial.P};
}

kernels::ActionPoint action_trajectory(const kernels::ActionPoint& initial, const ClassicalObservable& obs,
                                       const CouplingParams& coupling, const CouplingProfile& profile, double t) {
  const double eg = coupling.epsilon() * profile.G(t);
  return {initial.xi, wrap_angle(initial.theta - eg * obs.dA_dxi(initial.xi) * initial.Pbar),
          initial.Qbar + eg * obs.A_of_xi(initial.xi), initial.Pbar};
}

UncertaintyDisturbance uncertainty_disturbance_product(const ProbeSpec& probe, const CouplingParams& coupling) {
  probe.validate();
  require(coupling.epsilon() > 0.0, ErrorCode::InvalidArgument, "resolution needs a nonzero coupling");
  UncertaintyDisturbance u;
  u.resolution = probe.sigma_Q / coupling.epsilon();
  u.disturbance = coupling.epsilon() * probe.sigma_P;
  u.product = probe.sigma_Q * probe.sigma_P;
  return u;
}

std::vector<double> Histogram::edges() const {
  std::vector<double> e(mass.size() + 1);
  for (std::size_t b = 0; b < e.size(); ++b) e[b] = lo + width() * static_cast<double>(b);
  return e;
}

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  require(hi > lo && bins >= 1, ErrorCode::InvalidArgument, "histogram needs hi > lo and at least one bin");
  require(!values.empty(), ErrorCode::InsufficientSamples, "histogram of an empty sample");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  std::vector<std::size_t> count(bins, 0);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (double x : values) {
    if (!(x >= lo && x <= hi)) {
      ++h.outside;
      continue;
    }
    const auto b = std::min(static_cast<std::size_t>((x - lo) / w), bins - 1);
    ++count[b];
  }
  h.mass.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) h.mass[b] = static_cast<double>(count[b]) / static_cast<double>(values.size());
  return h;
}

std::vector<double> bin_masses(const Grid1D& grid, std::span<const double> density, double lo, double hi,
                               std::size_t bins) {
  require(density.size() == grid.size(), ErrorCode::ShapeMismatch, "density samples differ from the grid");
  require(hi > lo && bins >= 1, ErrorCode::InvalidArgument, "bins need hi > lo");
  const double h = grid.spacing();
  const auto c = cumulative(density, h);
  // Integral of the linear interpolant from grid.lo() to x.
  auto F = [&](double x) {
    if (x <= grid.lo()) return 0.0;
    if (x >= grid.hi()) return c.back();
    const double u = (x - grid.lo()) / h;
    const auto k = std::min(static_cast<std::size_t>(u), grid.size() - 2);
    const double s = (u - static_cast<double>(k)) * h;
    const double a = density[k], b = density[k + 1];
    return c[k] + a * s + 0.5 * (b - a) / h * s * s;
  };
  std::vector<double> m(bins);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) m[b] = F(lo + w * static_cast<double>(b + 1)) - F(lo + w * static_cast<double>(b));
  return m;
}

double l1_distance(const Histogram& hist, std::span<const double> reference) {
  require(reference.size() == hist.bins(), ErrorCode::ShapeMismatch, "reference bin count differs");
  double total = 0.0, ref_total = 0.0;
  double s = 0.0;
  for (std::size_t b = 0; b < reference.size(); ++b) {
    total += hist.mass[b];
    ref_total += reference[b];
    s += std::fabs(hist.mass[b] - reference[b]);
  }
  // Out-of-range mass is one extra bin on both sides.
  return s + std::fabs((1.0 - total) - (1.0 - ref_total));
}

}  // namespace vnm::mc
