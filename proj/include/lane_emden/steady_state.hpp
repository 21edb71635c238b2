#pragma once

#include <optional>
#include <vector>

#include "lane_emden/config.hpp"
#include "lane_emden/profile.hpp"

namespace lane_emden {

inline constexpr double kDefaultTol = 1e-10;

struct IntegrationOptions {
  double tol = kDefaultTol;
  double r_max = 100.0;
  /// Halt at the first node where rho drops below this value.
  std::optional<double> stop_density;
  /// Accepted steps are capped at this fraction of max(r, core length / 50), which
  /// keeps the stored grid dense enough for Hermite interpolation.
  double max_step_fraction = 0.005;
};

/// Integrates the first-order system (enthalpy, mass) outward from the
/// center. The integral forms give enthalpy' = -((gamma-1)/gamma) m / r^{d-1}
/// (resp. h' = -m / r^{d-1}) and m' = 4 pi r^{d-1} rho.
Profile integrate_profile(const StarConfig& config, const IntegrationOptions& options);

Profile integrate_gas_profile(const StarConfig& config, double tol = kDefaultTol,
                              double r_max = 100.0);

/// Integrates until rho < 1 and truncates at the liquid radius.
Profile integrate_liquid_profile(const StarConfig& config, double tol = kDefaultTol);

/// Radius where the profile density equals 1, refined by TOMS748 on the
/// re-integrated solution so that |rho(R) - 1| <= 1e-12.
double liquid_radius(const Profile& profile);

/// Cuts the profile at its liquid radius; the last node is exactly R.
Profile truncate_liquid(const Profile& profile);

/// Upper bound on rho(r) from the decay lemma (three branches by gamma).
double decay_bound(const StarConfig& config, double r);

/// Radius at which decay_bound equals `density`; every solution has
/// rho < density beyond it.
double decay_bound_radius(const StarConfig& config, double density);

struct PohozaevResidual {
  double residual = 0.0;  ///< LHS - RHS
  double scale = 0.0;     ///< largest absolute individual term
  double normalized() const { return scale > 0.0 ? residual / scale : 0.0; }
};

/// Pohozaev identity evaluated with the integral term computed by composite
/// Gauss quadrature of the interpolated profile.
PohozaevResidual pohozaev_residual(const Profile& profile, double r);
/// Same identity at every node, in one cumulative pass.
std::vector<PohozaevResidual> pohozaev_residuals(const Profile& profile);

enum class Support { Compact, Infinite };
Support classify_support(int d, double gamma);

/// rho_k(r) = k rho(k^{1-gamma/2} r); mass scales by k^{1-d(1-gamma/2)}.
Profile scale_profile(const Profile& profile, double kappa);

/// Liquid radius of the scaled star, k^{-(1-gamma/2)} rho^{-1}(1/k).
double scaled_liquid_radius(const Profile& profile, double kappa);

}  // namespace lane_emden
