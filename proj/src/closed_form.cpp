#include "lane_emden/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"
#include "lane_emden/steady_state.hpp"

namespace lane_emden {

double singular_amplitude(int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  const double numerator = -d * gamma * gamma + 2.0 * (d - 1.0) * gamma;
  if (numerator < 0.0 || gamma >= 2.0)
    throw InvalidArgument(fmt::format(
        "no singular solution: 2(d-1) - d gamma = {} < 0", 2.0 * (d - 1.0) - d * gamma));
  const double base = numerator / (2.0 * kPi * (2.0 - gamma) * (2.0 - gamma));
  return std::pow(base, 1.0 / (2.0 - gamma));
}

ClosedFormStar singular_star(int d, double gamma) {
  const double a = singular_amplitude(d, gamma);
  ClosedFormStar star{ClosedFormVariant::Singular, d, gamma, a, -2.0 / (2.0 - gamma),
                      std::nullopt};
  if (a > 0.0) star.radius = std::pow(a, 1.0 - 0.5 * gamma);
  return star;
}

ClosedFormStar explicit_profile_critical(int d, double central_density) {
  if (d < 3) throw InvalidArgument(fmt::format("dimension must be >= 3, got {}", d));
  if (!(central_density > 0.0))
    throw InvalidArgument(
        fmt::format("central density must be positive, got {}", central_density));
  const double c = central_density;
  ClosedFormStar star{ClosedFormVariant::CriticalExplicit, d, support_threshold(d), c,
                      -1.0 - 0.5 * d, std::nullopt};
  if (c >= 1.0) {
    const double r2 = d * d / (2.0 * kPi) * std::pow(c, -4.0 / (d + 2.0)) *
                      (std::pow(c, 2.0 / (d + 2.0)) - 1.0);
    star.radius = std::sqrt(std::max(r2, 0.0));
  }
  return star;
}

namespace {

double explicit_k(const ClosedFormStar& s) {
  return 2.0 * kPi / (s.d * s.d) * std::pow(s.amplitude, 4.0 / (s.d + 2.0));
}

}  // namespace

double ClosedFormStar::density(double r) const {
  if (variant == ClosedFormVariant::Singular) return amplitude * std::pow(r, exponent);
  return amplitude * std::pow(1.0 + explicit_k(*this) * r * r, exponent);
}

double ClosedFormStar::density_slope(double r) const {
  if (variant == ClosedFormVariant::Singular)
    return amplitude * exponent * std::pow(r, exponent - 1.0);
  const double k = explicit_k(*this);
  const double b = 1.0 + k * r * r;
  return amplitude * exponent * std::pow(b, exponent - 1.0) * 2.0 * k * r;
}

double ClosedFormStar::density_curvature(double r) const {
  if (variant == ClosedFormVariant::Singular)
    return amplitude * exponent * (exponent - 1.0) * std::pow(r, exponent - 2.0);
  const double k = explicit_k(*this);
  const double b = 1.0 + k * r * r;
  return amplitude * exponent *
         ((exponent - 1.0) * std::pow(b, exponent - 2.0) * 4.0 * k * k * r * r +
          std::pow(b, exponent - 1.0) * 2.0 * k);
}

double ClosedFormStar::mass(double r) const {
  if (variant == ClosedFormVariant::Singular) {
    const double power = d + exponent;
    if (power <= 0.0)
      throw InvalidArgument("singular-star mass diverges at the center for this (d, gamma)");
    return 4.0 * kPi * amplitude * std::pow(r, power) / power;
  }
  // m = -(gamma/(gamma-1)) r^{d-1} w' reduces to 2 d A k r^d (1 + k r^2)^{-d/2}
  // with A = C^{(d-2)/(d+2)}.
  const double k = explicit_k(*this);
  const double a = std::pow(amplitude, (d - 2.0) / (d + 2.0));
  return 2.0 * d * a * k * std::pow(r, d) * std::pow(1.0 + k * r * r, -0.5 * d);
}

Profile ClosedFormStar::sample(std::span<const double> radii) const {
  const EnthalpyForm form = enthalpy_form(gamma);
  ProfileColumns cols;
  for (double r : radii) {
    if (variant == ClosedFormVariant::Singular && r == 0.0) continue;
    const double rho = density(r);
    const double slope = density_slope(r);
    cols.radius.push_back(r);
    cols.rho.push_back(rho);
    cols.enthalpy.push_back(enthalpy_from_density(form, gamma, rho));
    cols.enthalpy_slope.push_back(form == EnthalpyForm::Log
                                      ? slope / rho
                                      : (gamma - 1.0) * std::pow(rho, gamma - 2.0) * slope);
    cols.mass.push_back(r == 0.0 ? 0.0 : mass(r));
  }
  if (cols.radius.empty()) throw InvalidArgument("no sample radii");
  StarConfig config{d, gamma, cols.rho.front()};
  return Profile(config, kDefaultTol, std::move(cols), ProfileKind::Gas, Termination::Sampled);
}

double steady_state_residual(int d, double gamma, double r, double rho, double rho_slope,
                             double rho_curvature) {
  std::array<double, 3> terms{};
  if (is_isothermal(gamma)) {
    const double h1 = rho_slope / rho;
    const double h2 = rho_curvature / rho - h1 * h1;
    terms = {h2, (d - 1.0) * h1 / r, 4.0 * kPi * rho};
  } else {
    const double g1 = gamma - 1.0;
    const double w1 = g1 * std::pow(rho, gamma - 2.0) * rho_slope;
    const double w2 = g1 * ((gamma - 2.0) * std::pow(rho, gamma - 3.0) * rho_slope * rho_slope +
                            std::pow(rho, gamma - 2.0) * rho_curvature);
    terms = {w2, (d - 1.0) * w1 / r, 4.0 * kPi * g1 / gamma * rho};
  }
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  const double sum = terms[0] + terms[1] + terms[2];
  return scale > 0.0 ? sum / scale : 0.0;
}

}  // namespace lane_emden
