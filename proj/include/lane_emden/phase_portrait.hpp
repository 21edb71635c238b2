#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lane_emden/profile.hpp"

namespace lane_emden {

/// Scaled density v1 = r^{2/(2-gamma)} rho and scaled mass
/// v2 = r^{2/(2-gamma)-d} m at log-radius tau = ln r.
struct PhaseState {
  double v1 = 0.0;
  double v2 = 0.0;
  double tau = 0.0;
};

/// Right-hand side F(v) of the autonomous system dv/dtau = F(v).
std::array<double, 2> vector_field(double v1, double v2, int d, double gamma);

/// Jacobian of F at (v1, v2), v1 > 0.
std::array<std::array<double, 2>, 2> vector_field_jacobian(double v1, double v2, int d,
                                                           double gamma);

struct FixedPoints {
  PhaseState origin;
  PhaseState v_star;
};

FixedPoints fixed_points(int d, double gamma);

struct FixedPointReport {
  double v1_star = 0.0;
  double v2_star = 0.0;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  bool exponentially_stable = false;
};

/// Closed-form eigenvalues of the Jacobian at v*.
FixedPointReport jacobian_spectrum(int d, double gamma);

/// Upper bounds on v1 and v2 along any star. The v2 bound is +inf when
/// d <= 2/(2-gamma), where the mass integral behind it diverges.
struct PhaseBox {
  double v1_max;
  double v2_max;
};
PhaseBox buchdahl_box(int d, double gamma);

PhaseState profile_to_phase(const Profile& profile, double r);

/// Pushforward of every positive-radius node.
std::vector<PhaseState> phase_trajectory(const Profile& profile);

/// Divergence of v1^{-(2-gamma)} F, the Dulac function used to exclude
/// periodic orbits: -(d - 2 gamma/(2-gamma)) v1^{-(2-gamma)}.
double dulac_divergence(double v1, int d, double gamma);

struct TailFit {
  double exponent;             ///< c in |u1 - v1*| ~ r^{-c}
  double terminal_deviation;   ///< |u1(r_max) - v1*|
  std::size_t samples;
};

/// Least-squares fit of ln|u1 - v1*| against ln r over [r_max/10, r_max].
TailFit tail_convergence_rate(const Profile& profile);

/// R_inf = (v1*)^{1-gamma/2}, the large-central-density limit of the liquid
/// radius.
double radius_limit(int d, double gamma);

}  // namespace lane_emden
