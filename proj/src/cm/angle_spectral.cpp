#include "vnm/cm/angle_spectral.hpp"

#include <cmath>
#include <numbers>

#include "vnm/error.hpp"
#include "vnm/kernels.hpp"

namespace vnm::cm {

AngleActionDensity angle_spectral_solve(const AngleActionDensity& rho, const std::function<double(double)>& da_dxi,
                                        double tau, std::size_t mode_cutoff) {
  require(tau >= 0.0, ErrorCode::InvalidArgument, "tau must be non-negative");
  require(static_cast<bool>(da_dxi), ErrorCode::InvalidArgument, "angle solver needs dA/dxi");
  const auto& xg = rho.xigrid();
  std::vector<double> rate(xg.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const double d = da_dxi(xg.node(i));
    rate[i] = d * d;
  }
  RealField rows = rho.values();
  const auto dropped = kernels::parallel::damp_angle_modes(rows, rate, tau, mode_cutoff);
  const double lost = 2.0 * std::numbers::pi * trapezoid(xg, dropped);
  require(lost <= 1e-10, ErrorCode::ModeCutoffTooSmall,
          "modes above " + std::to_string(mode_cutoff) + " carry " + std::to_string(lost));
  return AngleActionDensity(xg, rho.thetagrid(), std::move(rows));
}

AngleActionDensity angle_spectral_solve(const AngleActionDensity& rho, const ClassicalObservable& obs, double tau,
                                        std::size_t mode_cutoff) {
  require(obs.has_action_form(), ErrorCode::UnsupportedObservable, "angle solver needs an observable A(xi)");
  return angle_spectral_solve(rho, [&obs](double xi) { return obs.dA_dxi(xi); }, tau, mode_cutoff);
}

AngleActionDensity strong_coupling_limit_cm(const AngleActionDensity& rho) {
  RealField v = rho.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i).setConstant(rho.values().row(i).mean());
  return AngleActionDensity(rho.xigrid(), rho.thetagrid(), std::move(v));
}

}  // namespace vnm::cm
