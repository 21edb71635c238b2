#include "ode_system.hpp"

#include <cmath>
#include <mutex>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>

#include "lane_emden/errors.hpp"

namespace lane_emden::detail {

namespace {

int rhs(double r, const double y[], double dydt[], void* raw) {
  const auto& p = *static_cast<const OdeParams*>(raw);
  const double rho = density_from_enthalpy(p.form, p.gamma, y[0]);
  const double rd1 = std::pow(r, p.d - 1);
  dydt[0] = -p.coupling * y[1] / rd1;
  dydt[1] = 4.0 * kPi * rd1 * rho;
  return GSL_SUCCESS;
}

void disable_gsl_abort() {
  static std::once_flag flag;
  std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

}  // namespace

OdeParams OdeParams::from(const StarConfig& config) {
  const EnthalpyForm form = enthalpy_form(config.gamma);
  const double coupling =
      form == EnthalpyForm::Log ? 1.0 : (config.gamma - 1.0) / config.gamma;
  return {config.d, config.gamma, form, coupling};
}

double OdeParams::enthalpy_slope(double r, double mass) const {
  if (r == 0.0) return 0.0;
  return -coupling * mass / std::pow(r, d - 1);
}

OdeStepper::OdeStepper(const OdeParams& params, double tol, const State& abs_scale)
    : params_(params), scale_(abs_scale) {
  disable_gsl_abort();
  system_ = gsl_odeiv2_system{rhs, nullptr, 2, &params_};
  stepper_.reset(gsl_odeiv2_step_alloc(gsl_odeiv2_step_rk8pd, 2));
  control_.reset(gsl_odeiv2_control_scaled_new(tol, tol, 1.0, 0.0, scale_.data(), 2));
  evolve_.reset(gsl_odeiv2_evolve_alloc(2));
  if (!stepper_ || !control_ || !evolve_) throw NumericalFailure("GSL allocation failed");
}

void OdeStepper::step(double& r, double r_target, double& h, State& y) {
  const int status = gsl_odeiv2_evolve_apply(evolve_.get(), control_.get(), stepper_.get(),
                                             &system_, &r, r_target, &h, y.data());
  if (status != GSL_SUCCESS)
    throw NumericalFailure(
        fmt::format("integrator failed at r = {} ({})", r, gsl_strerror(status)));
  if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
    throw NumericalFailure(fmt::format(
        "non-finite state at r = {}; the tolerance is too loose or r_max too aggressive", r));
}

void OdeStepper::advance(double& r, double r_target, State& y) {
  if (r_target <= r) return;
  double h = r_target - r;
  int guard = 0;
  while (r < r_target) {
    step(r, r_target, h, y);
    if (++guard > 1000000) throw NumericalFailure("re-integration did not reach its target");
  }
}

State abs_scale_for(const StarConfig& config, double seed_mass) {
  const EnthalpyForm form = enthalpy_form(config.gamma);
  const double enthalpy_scale =
      form == EnthalpyForm::Log ? 1.0 : std::pow(config.rho_center, config.gamma - 1.0);
  return {enthalpy_scale, seed_mass};
}

State advance_from_node(const Profile& profile, std::size_t i, double r_target) {
  const auto& c = profile.columns();
  State y{c.enthalpy[i], c.mass[i]};
  double r = c.radius[i];
  if (r_target == r) return y;
  if (r == 0.0)
    throw InvalidArgument("re-integration cannot start at the center; use the seed node");
  const double seed_mass = c.mass.size() > 1 ? c.mass[1] : c.mass[i];
  OdeStepper stepper(OdeParams::from(profile.config()), profile.tol(),
                     abs_scale_for(profile.config(), seed_mass));
  stepper.advance(r, r_target, y);
  return y;
}

}  // namespace lane_emden::detail
