#pragma once

#include <functional>

#include "vnm/angle_action.hpp"
#include "vnm/observable.hpp"

namespace vnm::cm {

inline constexpr std::size_t default_mode_cutoff = 64;

/// Solves d rho / d tau = (dA/dxi)^2 d^2 rho / d theta^2 by damping Fourier
/// mode m of every xi row by exp(-m^2 (dA/dxi)^2 tau). Modes above the cutoff
/// are dropped; ModeCutoffTooSmall if they carried more than 1e-10.
AngleActionDensity angle_spectral_solve(const AngleActionDensity& rho,
                                        const std::function<double(double)>& da_dxi, double tau,
                                        std::size_t mode_cutoff = default_mode_cutoff);
AngleActionDensity angle_spectral_solve(const AngleActionDensity& rho, const ClassicalObservable& obs,
                                        double tau, std::size_t mode_cutoff = default_mode_cutoff);

/// Theta average at every xi: the tau -> infinity limit.
AngleActionDensity strong_coupling_limit_cm(const AngleActionDensity& rho);

}  // namespace vnm::cm
