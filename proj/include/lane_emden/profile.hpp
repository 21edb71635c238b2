#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lane_emden/config.hpp"

namespace lane_emden {

enum class ProfileKind { Gas, LiquidTruncated };

/// Which enthalpy variable the profile stores: w = rho^{gamma-1} for
/// gamma > 1, h = ln rho for gamma = 1.
enum class EnthalpyForm { Power, Log };

/// Why the outward integration stopped.
enum class Termination {
  RadiusCap,      ///< reached r_max
  Underflow,      ///< density fell below the representable range
  GasSurface,     ///< w crossed zero; last node is the gas radius
  TargetDensity,  ///< density fell below the requested stop density
  Truncated,      ///< cut at the liquid radius
  Sampled,        ///< built from closed-form samples
};

EnthalpyForm enthalpy_form(double gamma);
double density_from_enthalpy(EnthalpyForm form, double gamma, double enthalpy);
double enthalpy_from_density(EnthalpyForm form, double gamma, double rho);

/// Node-wise columns of a radial profile. enthalpy_slope is d(enthalpy)/dr.
struct ProfileColumns {
  std::vector<double> radius;
  std::vector<double> rho;
  std::vector<double> enthalpy;
  std::vector<double> enthalpy_slope;
  std::vector<double> mass;
};

/// Interpolated state at an arbitrary radius.
struct ProfileSample {
  double rho;
  double enthalpy;
  double enthalpy_slope;
  double mass;
};

/// Immutable radial density profile on an increasing grid starting at r = 0.
///
/// Between nodes the enthalpy and the mass are cubic Hermite interpolants
/// built from the exact node derivatives (enthalpy_slope and 4 pi r^{d-1} rho),
/// so the interpolant is fourth-order accurate in the node spacing.
class Profile {
 public:
  Profile(StarConfig config, double tol, ProfileColumns columns, ProfileKind kind,
          Termination termination, std::optional<double> liquid_radius = std::nullopt,
          std::optional<double> gas_radius = std::nullopt);

  const StarConfig& config() const { return config_; }
  double tol() const { return tol_; }
  ProfileKind kind() const { return kind_; }
  Termination termination() const { return termination_; }
  EnthalpyForm form() const { return form_; }

  std::size_t size() const { return columns_.radius.size(); }
  std::span<const double> radius() const { return columns_.radius; }
  std::span<const double> rho() const { return columns_.rho; }
  std::span<const double> enthalpy() const { return columns_.enthalpy; }
  std::span<const double> enthalpy_slope() const { return columns_.enthalpy_slope; }
  std::span<const double> mass() const { return columns_.mass; }
  const ProfileColumns& columns() const { return columns_; }

  double r_last() const { return columns_.radius.back(); }

  /// Radius R with rho(R) = 1; present for liquid-truncated profiles.
  std::optional<double> liquid_radius() const { return liquid_radius_; }
  /// Radius where the gas density vanishes, for compactly supported gas stars.
  std::optional<double> gas_radius() const { return gas_radius_; }
  /// m at the last node (m(R) for a liquid profile).
  double total_mass() const { return columns_.mass.back(); }

  /// Hermite interpolation; r must lie in [0, r_last()].
  ProfileSample sample(double r) const;

  /// Index i with radius[i] <= r < radius[i+1] (clamped to the last interval).
  std::size_t interval(double r) const;

 private:
  StarConfig config_;
  double tol_;
  ProfileColumns columns_;
  ProfileKind kind_;
  Termination termination_;
  EnthalpyForm form_;
  std::optional<double> liquid_radius_;
  std::optional<double> gas_radius_;
};

}  // namespace lane_emden
