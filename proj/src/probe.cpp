#include "vnm/probe.hpp"

#include <cmath>
#include <numbers>

#include "vnm/error.hpp"

namespace vnm {

void UnitsConfig::validate() const {
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be positive");
  require(std::isfinite(scale_C) && scale_C > 0.0, ErrorCode::InvalidArgument, "scale_C must be positive");
}

void ProbeSpec::validate() const {
  require(std::isfinite(sigma_Q) && sigma_Q > 0.0, ErrorCode::InvalidArgument, "sigma_Q must be positive");
  require(std::isfinite(sigma_P) && sigma_P >= 0.0, ErrorCode::InvalidArgument, "sigma_P must be non-negative");
}

void ProbeSpec::require_independent() const {
  require(independent, ErrorCode::UnsupportedProbe, "probe position and momentum must be independent");
}

double ProbeSpec::position_density(double Q) const { return gaussian_pdf(Q, sigma_Q); }

double ProbeSpec::momentum_density(double P) const {
  require(sigma_P > 0.0, ErrorCode::InvalidState, "zero-width probe momentum has no density");
  return gaussian_pdf(P, sigma_P);
}

CouplingParams CouplingParams::from_probe(double epsilon, const ProbeSpec& probe) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be non-negative");
  probe.validate();
  const double es = epsilon * probe.sigma_P;
  return CouplingParams(epsilon, probe.sigma_P, 0.5 * es * es);
}

CouplingParams CouplingParams::from_tau(double epsilon, double tau) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be non-negative");
  require(std::isfinite(tau) && tau >= 0.0, ErrorCode::InvalidArgument, "tau must be non-negative");
  if (epsilon == 0.0) {
    require(tau == 0.0, ErrorCode::InvalidArgument, "nonzero tau needs nonzero epsilon");
    return CouplingParams(0.0, 0.0, 0.0);
  }
  return CouplingParams(epsilon, std::sqrt(2.0 * tau) / epsilon, tau);
}

double gaussian_pdf(double x, double sigma) noexcept {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace vnm
