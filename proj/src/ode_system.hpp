#pragma once

// Internal: GSL-backed integration of the (enthalpy, mass) system.

#include <array>
#include <memory>

#include <gsl/gsl_odeiv2.h>

#include "lane_emden/profile.hpp"

namespace lane_emden::detail {

using State = std::array<double, 2>;  // {enthalpy, mass}

struct OdeParams {
  int d;
  double gamma;
  EnthalpyForm form;
  double coupling;  // (gamma-1)/gamma for the w-form, 1 for the h-form

  static OdeParams from(const StarConfig& config);
  double enthalpy_slope(double r, double mass) const;
};

/// Adaptive Prince-Dormand 8(9) stepper with per-component absolute scales.
class OdeStepper {
 public:
  OdeStepper(const OdeParams& params, double tol, const State& abs_scale);

  /// One accepted step towards r_target (never past it).
  void step(double& r, double r_target, double& h, State& y);
  /// Integrates to exactly r_target.
  void advance(double& r, double r_target, State& y);

 private:
  struct StepDeleter { void operator()(gsl_odeiv2_step* s) const { gsl_odeiv2_step_free(s); } };
  struct ControlDeleter {
    void operator()(gsl_odeiv2_control* c) const { gsl_odeiv2_control_free(c); }
  };
  struct EvolveDeleter {
    void operator()(gsl_odeiv2_evolve* e) const { gsl_odeiv2_evolve_free(e); }
  };

  OdeParams params_;
  std::array<double, 2> scale_;
  gsl_odeiv2_system system_;
  std::unique_ptr<gsl_odeiv2_step, StepDeleter> stepper_;
  std::unique_ptr<gsl_odeiv2_control, ControlDeleter> control_;
  std::unique_ptr<gsl_odeiv2_evolve, EvolveDeleter> evolve_;
};

/// Absolute error scales used for a profile: enthalpy at the center (or 1 for
/// h) and the seeded mass.
State abs_scale_for(const StarConfig& config, double seed_mass);

/// State at `r_target` obtained by re-integrating from node `i` of `profile`.
State advance_from_node(const Profile& profile, std::size_t i, double r_target);

}  // namespace lane_emden::detail
