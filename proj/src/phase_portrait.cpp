#include "lane_emden/phase_portrait.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lane_emden/closed_form.hpp"
#include "lane_emden/errors.hpp"

namespace lane_emden {

namespace {

void require_subquadratic(double gamma) {
  if (!(gamma >= 1.0 && gamma < 2.0))
    throw InvalidArgument(
        fmt::format("the phase map needs 1 <= gamma < 2, got {}", gamma));
}

void require_below_support_threshold(int d, double gamma) {
  if (!(gamma < support_threshold(d) - kGammaMatchTol))
    throw InvalidArgument(fmt::format(
        "gamma = {} is not below 2d/(d+2) = {}; the tail does not approach the singular star",
        gamma, support_threshold(d)));
}

double phase_exponent(double gamma) { return 2.0 / (2.0 - gamma); }

}  // namespace

std::array<double, 2> vector_field(double v1, double v2, int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  require_subquadratic(gamma);
  if (v1 < 0.0) throw InvalidArgument("v1 must be non-negative");
  const double e = phase_exponent(gamma);
  return {-std::pow(v1, 2.0 - gamma) * v2 / gamma + e * v1, 4.0 * kPi * v1 - (d - e) * v2};
}

std::array<std::array<double, 2>, 2> vector_field_jacobian(double v1, double v2, int d,
                                                           double gamma) {
  validate_dimension_and_index(d, gamma);
  require_subquadratic(gamma);
  if (!(v1 > 0.0)) throw InvalidArgument("Jacobian needs v1 > 0");
  const double e = phase_exponent(gamma);
  return {{{-(2.0 - gamma) / gamma * std::pow(v1, 1.0 - gamma) * v2 + e,
            -std::pow(v1, 2.0 - gamma) / gamma},
           {4.0 * kPi, -(d - e)}}};
}

FixedPoints fixed_points(int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  require_subquadratic(gamma);
  if (!(2.0 * (d - 1.0) - d * gamma > 0.0))
    throw InvalidArgument(fmt::format(
        "no nontrivial fixed point: 2(d-1) - d gamma = {} <= 0", 2.0 * (d - 1.0) - d * gamma));
  const double base = (-d * gamma * gamma + 2.0 * (d - 1.0) * gamma) /
                      (2.0 * kPi * (2.0 - gamma) * (2.0 - gamma));
  FixedPoints fp;
  fp.v_star.v1 = std::pow(base, 1.0 / (2.0 - gamma));
  fp.v_star.v2 = 2.0 * gamma / (2.0 - gamma) * std::pow(base, (gamma - 1.0) / (2.0 - gamma));
  fp.v_star.tau = std::numeric_limits<double>::infinity();
  fp.origin.tau = -std::numeric_limits<double>::infinity();
  return fp;
}

FixedPointReport jacobian_spectrum(int d, double gamma) {
  const FixedPoints fp = fixed_points(d, gamma);
  const double center = phase_exponent(gamma) - 1.0 - 0.5 * d;
  const double disc = (d - 2.0) * (d - 2.0) -
                      8.0 * (-d * gamma + 2.0 * (d - 1.0)) / ((2.0 - gamma) * (2.0 - gamma));
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  FixedPointReport report;
  report.v1_star = fp.v_star.v1;
  report.v2_star = fp.v_star.v2;
  report.lambda_plus = center + 0.5 * root;
  report.lambda_minus = center - 0.5 * root;
  report.exponentially_stable =
      report.lambda_plus.real() < 0.0 && report.lambda_minus.real() < 0.0;
  return report;
}

PhaseBox buchdahl_box(int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  require_subquadratic(gamma);
  const double bound = std::pow(2.0 * kPi / d * (2.0 - gamma) / gamma, -1.0 / (2.0 - gamma));
  const double mass_power = d - phase_exponent(gamma);
  return {bound, mass_power > 0.0 ? 4.0 * kPi * bound / mass_power
                                  : std::numeric_limits<double>::infinity()};
}

PhaseState profile_to_phase(const Profile& profile, double r) {
  const double gamma = profile.config().gamma;
  require_subquadratic(gamma);
  if (!(r > 0.0))
    throw InvalidArgument("phase variables vanish at r = 0; use a positive radius");
  const ProfileSample s = profile.sample(r);
  const double e = phase_exponent(gamma);
  return {std::pow(r, e) * s.rho, std::pow(r, e - profile.config().d) * s.mass, std::log(r)};
}

std::vector<PhaseState> phase_trajectory(const Profile& profile) {
  const double gamma = profile.config().gamma;
  require_subquadratic(gamma);
  const double e = phase_exponent(gamma);
  const int d = profile.config().d;
  std::vector<PhaseState> out;
  const auto& c = profile.columns();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = c.radius[i];
    if (r <= 0.0) continue;
    out.push_back({std::pow(r, e) * c.rho[i], std::pow(r, e - d) * c.mass[i], std::log(r)});
  }
  return out;
}

double dulac_divergence(double v1, int d, double gamma) {
  require_subquadratic(gamma);
  return -(d - 2.0 * gamma / (2.0 - gamma)) * std::pow(v1, -(2.0 - gamma));
}

TailFit tail_convergence_rate(const Profile& profile) {
  const int d = profile.config().d;
  const double gamma = profile.config().gamma;
  require_below_support_threshold(d, gamma);
  if (profile.kind() != ProfileKind::Gas)
    throw InvalidArgument("tail fit needs a gas profile");
  const double v1_star = fixed_points(d, gamma).v_star.v1;
  const double r_max = profile.r_last();
  const double e = phase_exponent(gamma);
  const auto& c = profile.columns();

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    const double r = c.radius[i];
    if (r < 0.1 * r_max) continue;
    const double dev = std::abs(std::pow(r, e) * c.rho[i] - v1_star);
    if (dev == 0.0) continue;
    const double x = std::log(r);
    const double y = std::log(dev);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 8 || c.radius[1] > 0.1 * r_max)
    throw InvalidArgument(
        fmt::format("insufficient tail data: {} samples in [r_max/10, r_max]", n));
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double terminal = std::abs(std::pow(r_max, e) * c.rho.back() - v1_star);
  return {-slope, terminal, n};
}

double radius_limit(int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  require_below_support_threshold(d, gamma);
  return std::pow(fixed_points(d, gamma).v_star.v1, 1.0 - 0.5 * gamma);
}

}  // namespace lane_emden
