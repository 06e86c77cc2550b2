#pragma once

#include <functional>
#include <vector>

#include "vnm/phase_space.hpp"
#include "vnm/probe.hpp"

namespace vnm {

enum class ObservableKind { Position, ActionFunction, General };

/// Classical observable A(q, p) together with its gradient.
///
/// Position is A = q. ActionFunction depends on (q, p) only through
/// xi = (qbar^2 + pbar^2) / 2 with qbar = C q and pbar = p / C; it also exposes
/// A(xi) and dA/dxi for the angle-action solvers. General carries arbitrary
/// callables and is handled by finite differences downstream.
class ClassicalObservable {
 public:
  using Fn2 = std::function<double(double, double)>;
  using Fn1 = std::function<double(double)>;

  static ClassicalObservable position();
  static ClassicalObservable action_function(Fn1 a_of_xi, Fn1 da_dxi, UnitsConfig units = {});
  /// A(xi) = sum_k coeffs[k] xi^k.
  static ClassicalObservable action_polynomial(std::vector<double> coeffs, UnitsConfig units = {});
  static ClassicalObservable general(Fn2 a, Fn2 da_dq, Fn2 da_dp);

  ObservableKind kind() const noexcept { return kind_; }

  double operator()(double q, double p) const;
  double dA_dq(double q, double p) const;
  double dA_dp(double q, double p) const;

  bool has_action_form() const noexcept { return kind_ == ObservableKind::ActionFunction; }
  double A_of_xi(double xi) const;
  double dA_dxi(double xi) const;
  const UnitsConfig& units() const noexcept { return units_; }
  double xi(double q, double p) const noexcept;

  RealField sample(const Grid1D& qgrid, const Grid1D& pgrid) const;

 private:
  ObservableKind kind_ = ObservableKind::General;
  Fn2 a_;
  Fn2 dq_;
  Fn2 dp_;
  Fn1 a_xi_;
  Fn1 da_xi_;
  UnitsConfig units_;
};

struct DerivativeCheck {
  double max_error = 0.0;  // |fd - supplied| / max(1, |supplied|)
  bool ok = false;
};

/// Compares the supplied gradient with centered differences of the value at every node.
DerivativeCheck check_derivatives(const ClassicalObservable& obs, const Grid1D& qgrid,
                                  const Grid1D& pgrid, double tolerance = 1e-6);

double expectation(const PhaseSpaceDensity& rho, const ClassicalObservable& obs);

}  // namespace vnm
