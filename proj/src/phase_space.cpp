#include "vnm/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "interp.hpp"
#include "vnm/error.hpp"
#include "vnm/kernels.hpp"
#include "vnm/probe.hpp"

namespace vnm {

namespace {

Eigen::VectorXd weights_vector(const Grid1D& g) {
  const auto w = trapezoid_weights(g);
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

void require_same_grids(const PhaseSpaceDensity& a, const PhaseSpaceDensity& b) {
  require(a.qgrid() == b.qgrid() && a.pgrid() == b.pgrid(), ErrorCode::ShapeMismatch,
          "densities live on different grids");
}

}  // namespace

PhaseSpaceDensity::PhaseSpaceDensity(Grid1D qgrid, Grid1D pgrid, RealField values)
    : qgrid_(qgrid), pgrid_(pgrid), values_(std::move(values)) {
  require(static_cast<std::size_t>(values_.rows()) == qgrid_.size() &&
              static_cast<std::size_t>(values_.cols()) == pgrid_.size(),
          ErrorCode::ShapeMismatch, "density values do not match the (q, p) grid");
}

double PhaseSpaceDensity::mass() const {
  return weights_vector(qgrid_).dot(values_ * weights_vector(pgrid_));
}

double PhaseSpaceDensity::leakage(double band) const {
  const auto nq = qgrid_.size();
  const auto np = pgrid_.size();
  const auto bq = std::max<std::size_t>(1, static_cast<std::size_t>(band * static_cast<double>(nq)));
  const auto bp = std::max<std::size_t>(1, static_cast<std::size_t>(band * static_cast<double>(np)));
  const auto wq = trapezoid_weights(qgrid_);
  const auto wp = trapezoid_weights(pgrid_);
  double s = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    const bool edge_q = i < bq || i >= nq - bq;
    for (std::size_t j = 0; j < np; ++j) {
      if (edge_q || j < bp || j >= np - bp) s += wq[i] * wp[j] * std::fabs(values_(i, j));
    }
  }
  return s;
}

DensityCheck check_density(const PhaseSpaceDensity& rho, const DensityTolerances& tol) {
  DensityCheck c;
  c.min_value = rho.values().minCoeff();
  c.mass = rho.mass();
  c.leakage = rho.leakage();
  c.ok = c.min_value >= -tol.negativity && std::fabs(c.mass - 1.0) <= tol.mass && c.leakage <= tol.leakage_budget;
  return c;
}

void validate(const PhaseSpaceDensity& rho, const DensityTolerances& tol) {
  const auto c = check_density(rho, tol);
  require(c.ok, ErrorCode::InvalidState,
          "density fails invariants: min " + std::to_string(c.min_value) + ", mass " + std::to_string(c.mass) +
              ", leakage " + std::to_string(c.leakage));
}

PhaseSpaceFunction gaussian_mixture_function(std::vector<GaussianComponent> components) {
  require(!components.empty(), ErrorCode::InvalidArgument, "mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight >= 0.0 && c.sigma_q > 0.0 && c.sigma_p > 0.0 && std::fabs(c.correlation) < 1.0,
            ErrorCode::InvalidArgument, "invalid Gaussian component");
    total += c.weight;
  }
  require(total > 0.0, ErrorCode::InvalidArgument, "mixture weights sum to zero");
  for (auto& c : components) c.weight /= total;
  return [cs = std::move(components)](double q, double p) {
    double s = 0.0;
    for (const auto& c : cs) {
      const double r = c.correlation;
      const double one_r2 = 1.0 - r * r;
      const double u = (q - c.mean_q) / c.sigma_q;
      const double v = (p - c.mean_p) / c.sigma_p;
      const double norm = 2.0 * std::numbers::pi * c.sigma_q * c.sigma_p * std::sqrt(one_r2);
      s += c.weight * std::exp(-0.5 * (u * u - 2.0 * r * u * v + v * v) / one_r2) / norm;
    }
    return s;
  };
}

PhaseSpaceDensity tabulate(const Grid1D& qgrid, const Grid1D& pgrid, const PhaseSpaceFunction& f) {
  const auto qs = qgrid.nodes();
  const auto ps = pgrid.nodes();
  return PhaseSpaceDensity(qgrid, pgrid, kernels::parallel::tabulate(qs, ps, f));
}

PhaseSpaceDensity normalized(const PhaseSpaceDensity& rho) {
  const double m = rho.mass();
  require(m > 0.0, ErrorCode::InvalidState, "cannot normalize a density with non-positive mass");
  return PhaseSpaceDensity(rho.qgrid(), rho.pgrid(), rho.values() / m);
}

PhaseSpaceDensity build_gaussian_phase_density(const Grid1D& qgrid, const Grid1D& pgrid, double sigma_q,
                                               double sigma_p) {
  require(sigma_q > 0.0 && sigma_p > 0.0, ErrorCode::InvalidArgument, "Gaussian widths must be positive");
  require(6.0 * sigma_q <= qgrid.half_width(), ErrorCode::GridTooNarrow, "q grid narrower than 6 sigma_q");
  require(6.0 * sigma_p <= pgrid.half_width(), ErrorCode::GridTooNarrow, "p grid narrower than 6 sigma_p");
  return normalized(tabulate(qgrid, pgrid, [=](double q, double p) {
    return gaussian_pdf(q, sigma_q) * gaussian_pdf(p, sigma_p);
  }));
}

PhaseSpaceDensity build_gaussian_mixture(const Grid1D& qgrid, const Grid1D& pgrid,
                                         std::span<const GaussianComponent> components) {
  return normalized(
      tabulate(qgrid, pgrid, gaussian_mixture_function({components.begin(), components.end()})));
}

double delta_width(const Grid1D& qgrid) noexcept { return 2.0 * qgrid.spacing(); }

PhaseSpaceDensity build_delta_density(const Grid1D& qgrid, const Grid1D& pgrid,
                                      std::span<const double> q_positions, double sigma_p) {
  require(!q_positions.empty(), ErrorCode::InvalidArgument, "need at least one delta position");
  require(sigma_p > 0.0, ErrorCode::InvalidArgument, "sigma_p must be positive");
  for (double q0 : q_positions)
    require(qgrid.contains(q0), ErrorCode::InvalidArgument, "delta position outside the q grid");
  const double w = delta_width(qgrid);
  std::vector<double> qs(q_positions.begin(), q_positions.end());
  const double share = 1.0 / static_cast<double>(qs.size());
  return normalized(tabulate(qgrid, pgrid, [=](double q, double p) {
    double s = 0.0;
    for (double q0 : qs) s += gaussian_pdf(q - q0, w);
    return share * s * gaussian_pdf(p, sigma_p);
  }));
}

std::vector<double> marginal(const PhaseSpaceDensity& rho, Axis axis) {
  Eigen::VectorXd m = axis == Axis::Q ? Eigen::VectorXd(rho.values() * weights_vector(rho.pgrid()))
                                      : Eigen::VectorXd(rho.values().transpose() * weights_vector(rho.qgrid()));
  return {m.data(), m.data() + m.size()};
}

double expectation(const PhaseSpaceDensity& rho, const RealField& observable_values) {
  require(observable_values.rows() == rho.values().rows() && observable_values.cols() == rho.values().cols(),
          ErrorCode::ShapeMismatch, "observable samples do not match the density grid");
  const RealField prod = rho.values().cwiseProduct(observable_values);
  return weights_vector(rho.qgrid()).dot(prod * weights_vector(rho.pgrid()));
}

PhaseSpaceFunction interpolator(const PhaseSpaceDensity& rho, Interpolation method) {
  auto data = std::make_shared<const PhaseSpaceDensity>(rho);
  const bool cubic = method == Interpolation::Cubic;
  return [data, cubic](double q, double p) {
    const auto& qg = data->qgrid();
    const auto& pg = data->pgrid();
    if (!qg.contains(q) || !pg.contains(p)) return 0.0;
    const auto sq = detail::axis_stencil((q - qg.lo()) / qg.spacing(), qg.size(), cubic);
    const auto sp = detail::axis_stencil((p - pg.lo()) / pg.spacing(), pg.size(), cubic);
    const auto& v = data->values();
    double s = 0.0;
    for (int a = 0; a < sq.width; ++a) {
      double row = 0.0;
      for (int b = 0; b < sp.width; ++b) row += sp.w[b] * v(sq.start + a, sp.start + b);
      s += sq.w[a] * row;
    }
    return std::max(s, 0.0);
  };
}

PhaseSpaceDensity mix(double p1, const PhaseSpaceDensity& a, double p2, const PhaseSpaceDensity& b) {
  require_same_grids(a, b);
  require(p1 >= 0.0 && p2 >= 0.0 && std::fabs(p1 + p2 - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "mixture weights must be non-negative and sum to 1");
  return PhaseSpaceDensity(a.qgrid(), a.pgrid(), p1 * a.values() + p2 * b.values());
}

double l1_distance(const PhaseSpaceDensity& a, const PhaseSpaceDensity& b) {
  require_same_grids(a, b);
  const RealField d = (a.values() - b.values()).cwiseAbs();
  return weights_vector(a.qgrid()).dot(d * weights_vector(a.pgrid()));
}

}  // namespace vnm
