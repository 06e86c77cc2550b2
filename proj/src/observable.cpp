#include "vnm/observable.hpp"

#include <algorithm>
#include <cmath>

#include "vnm/error.hpp"
#include "vnm/kernels.hpp"

namespace vnm {

ClassicalObservable ClassicalObservable::position() {
  ClassicalObservable o;
  o.kind_ = ObservableKind::Position;
  o.a_ = [](double q, double) { return q; };
  o.dq_ = [](double, double) { return 1.0; };
  o.dp_ = [](double, double) { return 0.0; };
  return o;
}

ClassicalObservable ClassicalObservable::action_function(Fn1 a_of_xi, Fn1 da_dxi, UnitsConfig units) {
  require(static_cast<bool>(a_of_xi) && static_cast<bool>(da_dxi), ErrorCode::InvalidArgument,
          "action observable needs A(xi) and dA/dxi");
  units.validate();
  ClassicalObservable o;
  o.kind_ = ObservableKind::ActionFunction;
  o.units_ = units;
  o.a_xi_ = std::move(a_of_xi);
  o.da_xi_ = std::move(da_dxi);
  const double c = units.scale_C;
  o.a_ = [f = o.a_xi_, c](double q, double p) {
    const double qb = c * q, pb = p / c;
    return f(0.5 * (qb * qb + pb * pb));
  };
  // dxi/dq = C^2 q, dxi/dp = p / C^2.
  o.dq_ = [f = o.da_xi_, c](double q, double p) {
    const double qb = c * q, pb = p / c;
    return f(0.5 * (qb * qb + pb * pb)) * c * c * q;
  };
  o.dp_ = [f = o.da_xi_, c](double q, double p) {
    const double qb = c * q, pb = p / c;
    return f(0.5 * (qb * qb + pb * pb)) * p / (c * c);
  };
  return o;
}

ClassicalObservable ClassicalObservable::action_polynomial(std::vector<double> coeffs, UnitsConfig units) {
  require(!coeffs.empty(), ErrorCode::InvalidArgument, "polynomial needs coefficients");
  std::vector<double> deriv;
  for (std::size_t k = 1; k < coeffs.size(); ++k) deriv.push_back(static_cast<double>(k) * coeffs[k]);
  auto horner = [](const std::vector<double>& c) {
    return [c](double x) {
      double s = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
      return s;
    };
  };
  return action_function(horner(coeffs), horner(deriv), units);
}

ClassicalObservable ClassicalObservable::general(Fn2 a, Fn2 da_dq, Fn2 da_dp) {
  require(a && da_dq && da_dp, ErrorCode::InvalidArgument, "general observable needs A and both derivatives");
  ClassicalObservable o;
  o.kind_ = ObservableKind::General;
  o.a_ = std::move(a);
  o.dq_ = std::move(da_dq);
  o.dp_ = std::move(da_dp);
  return o;
}

double ClassicalObservable::operator()(double q, double p) const { return a_(q, p); }
double ClassicalObservable::dA_dq(double q, double p) const { return dq_(q, p); }
double ClassicalObservable::dA_dp(double q, double p) const { return dp_(q, p); }

double ClassicalObservable::A_of_xi(double xi) const {
  require(has_action_form(), ErrorCode::UnsupportedObservable, "observable is not a function of xi");
  return a_xi_(xi);
}

double ClassicalObservable::dA_dxi(double xi) const {
  require(has_action_form(), ErrorCode::UnsupportedObservable, "observable is not a function of xi");
  return da_xi_(xi);
}

double ClassicalObservable::xi(double q, double p) const noexcept {
  const double qb = units_.scale_C * q, pb = p / units_.scale_C;
  return 0.5 * (qb * qb + pb * pb);
}

RealField ClassicalObservable::sample(const Grid1D& qgrid, const Grid1D& pgrid) const {
  const auto qs = qgrid.nodes();
  const auto ps = pgrid.nodes();
  return kernels::parallel::tabulate(qs, ps, a_);
}

DerivativeCheck check_derivatives(const ClassicalObservable& obs, const Grid1D& qgrid, const Grid1D& pgrid,
                                  double tolerance) {
  DerivativeCheck c;
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    const double q = qgrid.node(i);
    const double hq = 1e-5 * std::max(1.0, std::fabs(q));
    for (std::size_t j = 0; j < pgrid.size(); ++j) {
      const double p = pgrid.node(j);
      const double hp = 1e-5 * std::max(1.0, std::fabs(p));
      const double fq = (obs(q + hq, p) - obs(q - hq, p)) / (2.0 * hq);
      const double fp = (obs(q, p + hp) - obs(q, p - hp)) / (2.0 * hp);
      const double dq = obs.dA_dq(q, p);
      const double dp = obs.dA_dp(q, p);
      c.max_error = std::max(c.max_error, std::fabs(fq - dq) / std::max(1.0, std::fabs(dq)));
      c.max_error = std::max(c.max_error, std::fabs(fp - dp) / std::max(1.0, std::fabs(dp)));
    }
  }
  c.ok = c.max_error <= tolerance;
  return c;
}

double expectation(const PhaseSpaceDensity& rho, const ClassicalObservable& obs) {
  return expectation(rho, obs.sample(rho.qgrid(), rho.pgrid()));
}

}  // namespace vnm
