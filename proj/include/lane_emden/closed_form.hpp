#pragma once

#include <optional>
#include <span>

#include "lane_emden/profile.hpp"

namespace lane_emden {

enum class ClosedFormVariant { Singular, CriticalExplicit };

/// Exact steady states. The singular star is rho = A r^{-2/(2-gamma)} on
/// (0, inf); the critical-index star is
/// rho = C (1 + (2 pi/d^2) C^{4/(d+2)} r^2)^{-1-d/2}.
struct ClosedFormStar {
  ClosedFormVariant variant;
  int d;
  double gamma;
  double amplitude;  ///< A (singular) or C (critical explicit)
  double exponent;   ///< power of r (singular) or of the bracket (explicit)
  std::optional<double> radius;  ///< liquid radius for C > 1

  double density(double r) const;
  double density_slope(double r) const;
  double density_curvature(double r) const;
  double mass(double r) const;

  /// Samples the closed form onto a Profile (kind Gas, termination Sampled).
  /// For the singular star every radius must be positive except a leading 0,
  /// which is skipped.
  Profile sample(std::span<const double> radii) const;
};

ClosedFormStar singular_star(int d, double gamma);
ClosedFormStar explicit_profile_critical(int d, double central_density);

/// The singular-star amplitude, which coincides with the nontrivial fixed
/// point v1*: ((1/2pi)(-d gamma^2 + 2(d-1) gamma)/(2-gamma)^2)^{1/(2-gamma)}.
double singular_amplitude(int d, double gamma);

/// Normalized residual of the radial steady-state ODE written in terms of
/// rho, rho', rho'' (w-form for gamma > 1, h-form for gamma = 1). The value
/// is divided by the largest absolute term.
double steady_state_residual(int d, double gamma, double r, double rho, double rho_slope,
                             double rho_curvature);

}  // namespace lane_emden
