#include "lane_emden/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "lane_emden/errors.hpp"
#include "ode_system.hpp"

namespace lane_emden {

namespace {

using detail::OdeParams;
using detail::OdeStepper;
using detail::State;

// Densities below this are treated as underflowed.
constexpr double kUnderflowDensity = 1e-290;
constexpr int kMaxSteps = 5'000'000;

struct Node {
  double r;
  State y;
};

// Taylor seed at r = h: w = w0 - (2 pi/d)((gamma-1)/gamma) rho0 r^2 (resp. h-form),
// m = 4 pi rho0 (r^d/d - k r^{d+2}/(d+2)) with rho = rho0 (1 - k r^2).
State taylor_seed(const StarConfig& c, double h) {
  const double rho0 = c.rho_center;
  const double k = 2.0 * kPi / (c.d * c.gamma) * std::pow(rho0, 2.0 - c.gamma);
  const double mass = 4.0 * kPi * rho0 *
                      (std::pow(h, c.d) / c.d - k * std::pow(h, c.d + 2) / (c.d + 2.0));
  if (is_isothermal(c.gamma)) {
    return {std::log(rho0) - 2.0 * kPi / c.d * rho0 * h * h, mass};
  }
  const double w0 = std::pow(rho0, c.gamma - 1.0);
  return {w0 - 2.0 * kPi / c.d * (c.gamma - 1.0) / c.gamma * rho0 * h * h, mass};
}

class ColumnBuilder {
 public:
  ColumnBuilder(const StarConfig& config) : config_(config), params_(OdeParams::from(config)) {}

  void push(double r, const State& y, std::optional<double> rho = std::nullopt) {
    cols_.radius.push_back(r);
    cols_.enthalpy.push_back(y[0]);
    cols_.mass.push_back(y[1]);
    cols_.rho.push_back(rho ? *rho : density_from_enthalpy(params_.form, config_.gamma, y[0]));
    cols_.enthalpy_slope.push_back(params_.enthalpy_slope(r, y[1]));
  }
  ProfileColumns take() { return std::move(cols_); }

 private:
  StarConfig config_;
  OdeParams params_;
  ProfileColumns cols_;
};

// Root of g(r) = enthalpy(r) - target on [a, b], evaluating the enthalpy by
// re-integration from the node at a.
double locate_enthalpy_level(const OdeParams& params, double tol, const State& scale,
                             const Node& left, double b, double target) {
  auto g = [&](double r) {
    if (r == left.r) return left.y[0] - target;
    State y = left.y;
    double rr = left.r;
    OdeStepper stepper(params, tol, scale);
    stepper.advance(rr, r, y);
    return y[0] - target;
  };
  const double ga = g(left.r);
  const double gb = g(b);
  if (ga == 0.0) return left.r;
  if (gb == 0.0) return b;
  if (ga * gb > 0.0)
    throw NumericalFailure(fmt::format("enthalpy level {} not bracketed in [{}, {}]", target,
                                       left.r, b));
  boost::uintmax_t max_iter = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(
      g, left.r, b, ga, gb, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace

Profile integrate_profile(const StarConfig& config, const IntegrationOptions& options) {
  validate(config);
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(options.r_max > 0.0)) throw InvalidArgument("r_max must be positive");

  const OdeParams params = OdeParams::from(config);
  const double length = core_length(config);
  const double h0 = 1e-4 * std::min(length, options.r_max);
  const State seed = taylor_seed(config, h0);
  const State scale = detail::abs_scale_for(config, seed[1]);

  ColumnBuilder cols(config);
  cols.push(0.0, {enthalpy_from_density(params.form, config.gamma, config.rho_center), 0.0},
            config.rho_center);
  cols.push(h0, seed);

  OdeStepper stepper(params, options.tol, scale);
  double r = h0;
  State y = seed;
  double h = h0;
  Termination termination = Termination::RadiusCap;
  std::optional<double> gas_radius;

  for (int steps = 0;; ++steps) {
    if (r >= options.r_max) break;
    if (steps > kMaxSteps) throw NumericalFailure("step budget exhausted");
    const Node prev{r, y};
    const double cap = options.max_step_fraction * std::max(r, 0.02 * length);
    stepper.step(r, std::min(options.r_max, r + cap), h, y);

    if (params.form == EnthalpyForm::Power && y[0] <= 0.0) {
      const double rs = locate_enthalpy_level(params, options.tol, scale, prev, r, 0.0);
      State ys = prev.y;
      double rr = prev.r;
      OdeStepper(params, options.tol, scale).advance(rr, rs, ys);
      ys[0] = 0.0;
      if (rs > prev.r) cols.push(rs, ys);
      gas_radius = rs;
      termination = Termination::GasSurface;
      break;
    }
    cols.push(r, y);
    const double rho = density_from_enthalpy(params.form, config.gamma, y[0]);
    if (options.stop_density && rho < *options.stop_density) {
      termination = Termination::TargetDensity;
      break;
    }
    if (rho < kUnderflowDensity) {
      termination = Termination::Underflow;
      break;
    }
  }
  return Profile(config, options.tol, cols.take(), ProfileKind::Gas, termination, std::nullopt,
                 gas_radius);
}

Profile integrate_gas_profile(const StarConfig& config, double tol, double r_max) {
  IntegrationOptions options;
  options.tol = tol;
  options.r_max = r_max;
  return integrate_profile(config, options);
}

Profile integrate_liquid_profile(const StarConfig& config, double tol) {
  validate_liquid(config);
  IntegrationOptions options;
  options.tol = tol;
  options.r_max = 1.01 * decay_bound_radius(config, 1.0);
  options.stop_density = 1.0;
  return truncate_liquid(integrate_profile(config, options));
}

double liquid_radius(const Profile& profile) {
  const StarConfig& config = profile.config();
  if (!(config.rho_center > 1.0))
    throw InvalidArgument(fmt::format(
        "no liquid truncation: central density {} does not exceed 1", config.rho_center));
  if (profile.liquid_radius()) return *profile.liquid_radius();

  const auto rho = profile.rho();
  const auto it = std::find_if(rho.begin(), rho.end(), [](double v) { return v <= 1.0; });
  if (it == rho.end())
    throw InvalidArgument(fmt::format(
        "profile too short: density never reaches 1 before r = {}", profile.r_last()));
  const auto i = static_cast<std::size_t>(it - rho.begin());
  const auto& c = profile.columns();
  if (*it == 1.0) return c.radius[i];
  if (i < 2) throw NumericalFailure("liquid radius falls inside the seed interval");

  const OdeParams params = OdeParams::from(config);
  const State scale = detail::abs_scale_for(config, c.mass[1]);
  const double target = enthalpy_from_density(params.form, config.gamma, 1.0);
  const Node left{c.radius[i - 1], {c.enthalpy[i - 1], c.mass[i - 1]}};
  return locate_enthalpy_level(params, profile.tol(), scale, left, c.radius[i], target);
}

Profile truncate_liquid(const Profile& profile) {
  if (profile.kind() == ProfileKind::LiquidTruncated) return profile;
  const double R = liquid_radius(profile);
  const auto& c = profile.columns();
  ColumnBuilder cols(profile.config());
  std::size_t last = 0;
  for (std::size_t i = 0; i < profile.size() && c.radius[i] < R * (1.0 - 1e-13); ++i) {
    cols.push(c.radius[i], {c.enthalpy[i], c.mass[i]}, c.rho[i]);
    last = i;
  }
  cols.push(R, detail::advance_from_node(profile, last, R));
  return Profile(profile.config(), profile.tol(), cols.take(), ProfileKind::LiquidTruncated,
                 Termination::Truncated, R, std::nullopt);
}

double decay_bound(const StarConfig& config, double r) {
  validate(config);
  if (r < 0.0) throw InvalidArgument("radius must be non-negative");
  const double g = config.gamma;
  const double rho0 = config.rho_center;
  const int d = config.d;
  if (g == 2.0) return std::exp(std::log(rho0) - 2.0 * kPi / d / g * r * r);
  if (g == 1.0) return 1.0 / (1.0 / rho0 + 2.0 * kPi / d * r * r);
  return std::pow(std::pow(rho0, -(2.0 - g)) + 2.0 * kPi / d * (2.0 - g) / g * r * r,
                  -1.0 / (2.0 - g));
}

double decay_bound_radius(const StarConfig& config, double density) {
  validate(config);
  if (!(density > 0.0)) throw InvalidArgument("density level must be positive");
  const double g = config.gamma;
  const double rho0 = config.rho_center;
  const int d = config.d;
  if (density >= rho0) return 0.0;
  if (g == 2.0) return std::sqrt(std::log(rho0 / density) * d * g / (2.0 * kPi));
  const double c = 2.0 * kPi / d * (2.0 - g) / g;
  return std::sqrt((std::pow(density, -(2.0 - g)) - std::pow(rho0, -(2.0 - g))) / c);
}

namespace {

constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

// rho^gamma (= w^{alpha+1}, or e^h when gamma = 1) times y^{d-1}.
double pohozaev_integrand(const Profile& p, double y) {
  const double rho = p.sample(y).rho;
  return std::pow(rho, p.config().gamma) * std::pow(y, p.config().d - 1);
}

double gauss(const Profile& p, double a, double b) {
  if (b <= a) return 0.0;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < kGaussX.size(); ++k)
    s += kGaussW[k] * pohozaev_integrand(p, mid + half * kGaussX[k]);
  return s * half;
}

PohozaevResidual assemble_identity(const StarConfig& c, double r, double integral,
                                   double enthalpy, double slope) {
  const int d = c.d;
  const double g = c.gamma;
  std::array<double, 4> terms{};
  if (is_isothermal(g)) {
    terms = {-4.0 * kPi * integral, slope * std::pow(r, d - 1), 0.0, 0.0};
  } else {
    const double ratio = (g - 1.0) / g;
    const double w = enthalpy;
    const double w_alpha1 = std::pow(std::max(w, 0.0), g / (g - 1.0));
    terms = {2.0 * kPi * ratio * (2.0 * d * ratio - (d - 2.0)) * integral,
             0.5 * slope * slope * std::pow(r, d),
             4.0 * kPi * ratio * ratio * w_alpha1 * std::pow(r, d),
             0.5 * (d - 2.0) * slope * w * std::pow(r, d - 1)};
  }
  PohozaevResidual out;
  out.residual = terms[0] - (terms[1] + terms[2] + terms[3]);
  for (double t : terms) out.scale = std::max(out.scale, std::abs(t));
  return out;
}

}  // namespace

PohozaevResidual pohozaev_residual(const Profile& profile, double r) {
  if (!(r >= 0.0) || r > profile.r_last())
    throw InvalidArgument(fmt::format("radius {} outside the profile grid", r));
  const auto x = profile.radius();
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < x.size() && x[i] < r; ++i)
    integral += gauss(profile, x[i], std::min(x[i + 1], r));
  const ProfileSample s = profile.sample(r);
  return assemble_identity(profile.config(), r, integral, s.enthalpy, s.enthalpy_slope);
}

std::vector<PohozaevResidual> pohozaev_residuals(const Profile& profile) {
  const auto& c = profile.columns();
  std::vector<PohozaevResidual> out;
  out.reserve(profile.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) integral += gauss(profile, c.radius[i - 1], c.radius[i]);
    out.push_back(assemble_identity(profile.config(), c.radius[i], integral, c.enthalpy[i],
                                    c.enthalpy_slope[i]));
  }
  return out;
}

Support classify_support(int d, double gamma) {
  validate_dimension_and_index(d, gamma);
  return gamma > support_threshold(d) + kGammaMatchTol ? Support::Compact : Support::Infinite;
}

Profile scale_profile(const Profile& profile, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw InvalidArgument(fmt::format("scale factor must be positive, got {}", kappa));
  if (profile.kind() != ProfileKind::Gas)
    throw InvalidArgument("only gas profiles can be rescaled");
  const StarConfig& c = profile.config();
  const double g = c.gamma;
  const double stretch = std::pow(kappa, 1.0 - 0.5 * g);
  const double mass_factor = std::pow(kappa, 1.0 - c.d * (1.0 - 0.5 * g));
  const bool log_form = profile.form() == EnthalpyForm::Log;
  const double enthalpy_factor = log_form ? 1.0 : std::pow(kappa, g - 1.0);
  const double log_kappa = std::log(kappa);

  ProfileColumns out = profile.columns();
  for (std::size_t i = 0; i < out.radius.size(); ++i) {
    out.radius[i] /= stretch;
    out.rho[i] *= kappa;
    out.enthalpy[i] = log_form ? out.enthalpy[i] + log_kappa : out.enthalpy[i] * enthalpy_factor;
    out.enthalpy_slope[i] *= enthalpy_factor * stretch;
    out.mass[i] *= mass_factor;
  }
  StarConfig scaled = c;
  scaled.rho_center *= kappa;
  std::optional<double> gas_radius;
  if (profile.gas_radius()) gas_radius = *profile.gas_radius() / stretch;
  return Profile(scaled, profile.tol(), std::move(out), ProfileKind::Gas,
                 profile.termination(), std::nullopt, gas_radius);
}

double scaled_liquid_radius(const Profile& profile, double kappa) {
  if (!(kappa * profile.config().rho_center > 1.0))
    throw InvalidArgument(
        fmt::format("scaled central density {} does not exceed 1; no liquid radius",
                    kappa * profile.config().rho_center));
  return liquid_radius(scale_profile(profile, kappa));
}

}  // namespace lane_emden
