#pragma once

#include <numbers>

namespace lane_emden {

inline constexpr double kPi = std::numbers::pi;

/// Physical parameters of a polytropic star with K = C = 1, so the liquid
/// boundary density is 1.
struct StarConfig {
  int d = 3;
  double gamma = 1.2;
  double rho_center = 1.0;
};

/// Tolerance used when comparing gamma against the rational thresholds below.
inline constexpr double kGammaMatchTol = 1e-12;

/// 2d/(d+2): compact support threshold, also the critical index with the
/// explicit solution.
constexpr double support_threshold(int d) { return 2.0 * d / (d + 2.0); }

/// 2(d-1)/d: linear stability threshold for liquid stars.
constexpr double stability_threshold(int d) { return 2.0 * (d - 1.0) / d; }

bool is_isothermal(double gamma);
bool is_critical_index(int d, double gamma);

void validate_dimension_and_index(int d, double gamma);
void validate(const StarConfig& config);
/// Also requires rho_center > 1.
void validate_liquid(const StarConfig& config);

/// Characteristic length rho_center^{-(1 - gamma/2)} of the self-similar family.
double core_length(const StarConfig& config);

}  // namespace lane_emden
