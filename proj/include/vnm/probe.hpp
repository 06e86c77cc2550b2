#pragma once

namespace vnm {

/// Action units and the canonical rescaling qbar = C q, pbar = p / C.
struct UnitsConfig {
  double hbar = 1.0;
  double scale_C = 1.0;

  void validate() const;
};

/// Zero-centered Gaussian probe. Position and momentum widths are independent
/// parameters; the classical probe density is N(Q; sigma_Q) N(P; sigma_P).
struct ProbeSpec {
  double sigma_Q = 1.0;
  double sigma_P = 0.0;
  bool independent = true;

  static constexpr double mean_Q = 0.0;
  static constexpr double mean_P = 0.0;

  void validate() const;
  void require_independent() const;

  double position_density(double Q) const;
  // Zero-width momentum distributions have no density; callers handle
  // sigma_P == 0 through tau == 0.
  double momentum_density(double P) const;
};

/// Coupling strength and the derived measurement strength tau = (eps sigma_P)^2 / 2.
class CouplingParams {
 public:
  static CouplingParams from_probe(double epsilon, const ProbeSpec& probe);
  static CouplingParams from_tau(double epsilon, double tau);

  double epsilon() const noexcept { return epsilon_; }
  double tau() const noexcept { return tau_; }
  // Probe momentum width consistent with tau.
  double sigma_P() const noexcept { return sigma_P_; }

 private:
  CouplingParams(double epsilon, double sigma_P, double tau)
      : epsilon_(epsilon), sigma_P_(sigma_P), tau_(tau) {}

  double epsilon_;
  double sigma_P_;
  double tau_;
};

double gaussian_pdf(double x, double sigma) noexcept;

}  // namespace vnm
