#include "lane_emden/profile.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"

namespace lane_emden {

EnthalpyForm enthalpy_form(double gamma) {
  return is_isothermal(gamma) ? EnthalpyForm::Log : EnthalpyForm::Power;
}

double density_from_enthalpy(EnthalpyForm form, double gamma, double enthalpy) {
  if (form == EnthalpyForm::Log) return std::exp(enthalpy);
  if (enthalpy <= 0.0) return 0.0;
  return std::pow(enthalpy, 1.0 / (gamma - 1.0));
}

double enthalpy_from_density(EnthalpyForm form, double gamma, double rho) {
  if (form == EnthalpyForm::Log) return std::log(rho);
  return std::pow(rho, gamma - 1.0);
}

Profile::Profile(StarConfig config, double tol, ProfileColumns columns, ProfileKind kind,
                 Termination termination, std::optional<double> liquid_radius,
                 std::optional<double> gas_radius)
    : config_(config),
      tol_(tol),
      columns_(std::move(columns)),
      kind_(kind),
      termination_(termination),
      form_(enthalpy_form(config.gamma)),
      liquid_radius_(liquid_radius),
      gas_radius_(gas_radius) {
  const std::size_t n = columns_.radius.size();
  if (n < 2) throw InvalidArgument("profile needs at least two nodes");
  if (columns_.rho.size() != n || columns_.enthalpy.size() != n ||
      columns_.enthalpy_slope.size() != n || columns_.mass.size() != n)
    throw InvalidArgument("profile columns have mismatched lengths");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(columns_.radius[i] > columns_.radius[i - 1]))
      throw InvalidArgument(fmt::format("profile radii not increasing at node {}", i));
  }
  if (kind_ == ProfileKind::LiquidTruncated && !liquid_radius_)
    throw InvalidArgument("liquid-truncated profile requires a liquid radius");
}

std::size_t Profile::interval(double r) const {
  const auto& x = columns_.radius;
  auto it = std::upper_bound(x.begin(), x.end(), r);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

namespace {

double hermite(double t, double h, double y0, double y1, double s0, double s1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * s0 + h01 * y1 + h11 * h * s1;
}

double hermite_slope(double t, double h, double y0, double y1, double s0, double s1) {
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return (d00 * y0 + d01 * y1) / h + d10 * s0 + d11 * s1;
}

}  // namespace

ProfileSample Profile::sample(double r) const {
  const auto& c = columns_;
  if (!(r >= 0.0) || r > r_last() * (1.0 + 1e-14))
    throw InvalidArgument(
        fmt::format("radius {} outside the profile grid [0, {}]", r, r_last()));
  const std::size_t i = interval(r);
  const double h = c.radius[i + 1] - c.radius[i];
  const double t = std::clamp((r - c.radius[i]) / h, 0.0, 1.0);

  const double e = hermite(t, h, c.enthalpy[i], c.enthalpy[i + 1], c.enthalpy_slope[i],
                           c.enthalpy_slope[i + 1]);
  const double es = hermite_slope(t, h, c.enthalpy[i], c.enthalpy[i + 1],
                                  c.enthalpy_slope[i], c.enthalpy_slope[i + 1]);
  const int d = config_.d;
  const double ms0 = 4.0 * kPi * std::pow(c.radius[i], d - 1) * c.rho[i];
  const double ms1 = 4.0 * kPi * std::pow(c.radius[i + 1], d - 1) * c.rho[i + 1];
  const double m = hermite(t, h, c.mass[i], c.mass[i + 1], ms0, ms1);

  ProfileSample s{};
  s.enthalpy = e;
  s.enthalpy_slope = es;
  s.mass = m;
  s.rho = density_from_enthalpy(form_, config_.gamma, e);
  if (t == 0.0) {
    s = {c.rho[i], c.enthalpy[i], c.enthalpy_slope[i], c.mass[i]};
  } else if (t == 1.0) {
    s = {c.rho[i + 1], c.enthalpy[i + 1], c.enthalpy_slope[i + 1], c.mass[i + 1]};
  }
  return s;
}

}  // namespace lane_emden
