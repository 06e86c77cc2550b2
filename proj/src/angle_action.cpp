#include "vnm/angle_action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "interp.hpp"
#include "vnm/error.hpp"

namespace vnm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grids(const AngleActionDensity& a, const AngleActionDensity& b) {
  require(a.xigrid() == b.xigrid() && a.thetagrid() == b.thetagrid(), ErrorCode::ShapeMismatch,
          "angle-action densities live on different grids");
}

}  // namespace

AngleActionDensity::AngleActionDensity(Grid1D xigrid, PeriodicGrid thetagrid, RealField values)
    : xigrid_(xigrid), thetagrid_(thetagrid), values_(std::move(values)) {
  require(xigrid_.lo() >= 0.0, ErrorCode::InvalidArgument, "xi grid must start at a non-negative action");
  require(static_cast<std::size_t>(values_.rows()) == xigrid_.size() &&
              static_cast<std::size_t>(values_.cols()) == thetagrid_.size(),
          ErrorCode::ShapeMismatch, "values do not match the (xi, theta) grid");
}

std::vector<double> AngleActionDensity::xi_marginal() const {
  std::vector<double> m(xigrid_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = values_.row(static_cast<Eigen::Index>(i)).sum() * thetagrid_.spacing();
  return m;
}

std::vector<double> AngleActionDensity::theta_marginal() const {
  std::vector<double> m(thetagrid_.size());
  const auto w = trapezoid_weights(xigrid_);
  for (std::size_t j = 0; j < m.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * values_(i, j);
    m[j] = s;
  }
  return m;
}

double AngleActionDensity::mass() const {
  const auto m = xi_marginal();
  return trapezoid(xigrid_, m);
}

Eigen::MatrixXcd AngleActionDensity::fourier_coefficients(std::size_t max_mode) const {
  const auto n = thetagrid_.size();
  Eigen::MatrixXcd c(values_.rows(), static_cast<Eigen::Index>(max_mode + 1));
  std::vector<std::complex<double>> phase(n);
  for (std::size_t m = 0; m <= max_mode; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = -kTwoPi * static_cast<double>((m * j) % n) / static_cast<double>(n);
      phase[j] = {std::cos(a), std::sin(a)};
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      std::complex<double> s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += values_(i, static_cast<Eigen::Index>(j)) * phase[j];
      c(i, static_cast<Eigen::Index>(m)) = s / static_cast<double>(n);
    }
  }
  return c;
}

double inscribed_xi_max(const Grid1D& qgrid, const Grid1D& pgrid, const UnitsConfig& units) {
  const double c = units.scale_C;
  const double r = std::min({-qgrid.lo() * c, qgrid.hi() * c, -pgrid.lo() / c, pgrid.hi() / c});
  require(r > 0.0, ErrorCode::InvalidArgument, "grid rectangle does not contain the origin");
  return 0.5 * r * r;
}

AngleActionDensity to_angle_action(const PhaseSpaceFunction& rho, const UnitsConfig& units,
                                   const Grid1D& xigrid, std::size_t ntheta) {
  units.validate();
  const PeriodicGrid tg(ntheta);
  RealField v(static_cast<Eigen::Index>(xigrid.size()), static_cast<Eigen::Index>(ntheta));
  const double c = units.scale_C;
  for (std::size_t i = 0; i < xigrid.size(); ++i) {
    const double r = std::sqrt(2.0 * xigrid.node(i));
    for (std::size_t j = 0; j < ntheta; ++j) {
      const double t = tg.node(j);
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho(r * std::cos(t) / c, r * std::sin(t) * c);
    }
  }
  return AngleActionDensity(xigrid, tg, std::move(v));
}

AngleActionDensity to_angle_action(const PhaseSpaceDensity& rho, const UnitsConfig& units,
                                   const Grid1D& xigrid, std::size_t ntheta, Interpolation method) {
  return to_angle_action(interpolator(rho, method), units, xigrid, ntheta);
}

PhaseSpaceDensity from_angle_action(const AngleActionDensity& rho, const UnitsConfig& units, const Grid1D& qgrid,
                                    const Grid1D& pgrid, Interpolation method) {
  units.validate();
  const bool cubic = method == Interpolation::Cubic;
  const auto& xg = rho.xigrid();
  const auto nt = rho.thetagrid().size();
  const double dt = rho.thetagrid().spacing();
  const auto& v = rho.values();
  const double c = units.scale_C;
  RealField out(static_cast<Eigen::Index>(qgrid.size()), static_cast<Eigen::Index>(pgrid.size()));
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    const double qb = c * qgrid.node(i);
    for (std::size_t j = 0; j < pgrid.size(); ++j) {
      const double pb = pgrid.node(j) / c;
      const double xi = 0.5 * (qb * qb + pb * pb);
      double s = 0.0;
      if (xg.contains(xi)) {
        const double theta = wrap_angle(std::atan2(pb, qb));
        const auto sx = detail::axis_stencil((xi - xg.lo()) / xg.spacing(), xg.size(), cubic);
        const auto st = detail::periodic_stencil(theta / dt, cubic);
        for (int a = 0; a < sx.width; ++a) {
          double row = 0.0;
          for (int b = 0; b < st.width; ++b)
            row += st.w[b] * v(sx.start + a, static_cast<Eigen::Index>(detail::wrap_index(st.start + b, nt)));
          s += sx.w[a] * row;
        }
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::max(s, 0.0);
    }
  }
  return PhaseSpaceDensity(qgrid, pgrid, std::move(out));
}

double l1_distance(const AngleActionDensity& a, const AngleActionDensity& b) {
  require_same_grids(a, b);
  const AngleActionDensity d(a.xigrid(), a.thetagrid(), (a.values() - b.values()).cwiseAbs());
  return d.mass();
}

}  // namespace vnm
