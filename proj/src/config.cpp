#include "lane_emden/config.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"

namespace lane_emden {

bool is_isothermal(double gamma) { return gamma == 1.0; }

bool is_critical_index(int d, double gamma) {
  return std::abs(gamma - support_threshold(d)) <= kGammaMatchTol;
}

void validate_dimension_and_index(int d, double gamma) {
  if (d < 3) throw InvalidArgument(fmt::format("dimension must be >= 3, got {}", d));
  if (!(gamma >= 1.0 && gamma <= 2.0))
    throw InvalidArgument(fmt::format("gamma must lie in [1, 2], got {}", gamma));
}

void validate(const StarConfig& config) {
  validate_dimension_and_index(config.d, config.gamma);
  if (!(config.rho_center > 0.0) || !std::isfinite(config.rho_center))
    throw InvalidArgument(
        fmt::format("central density must be positive, got {}", config.rho_center));
}

void validate_liquid(const StarConfig& config) {
  validate(config);
  if (!(config.rho_center > 1.0))
    throw InvalidArgument(fmt::format(
        "no liquid truncation: central density {} does not exceed the boundary density 1",
        config.rho_center));
}

double core_length(const StarConfig& config) {
  return std::pow(config.rho_center, -(1.0 - 0.5 * config.gamma));
}

}  // namespace lane_emden
