#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lane_emden/closed_form.hpp"
#include "lane_emden/errors.hpp"
#include "lane_emden/phase_portrait.hpp"
#include "lane_emden/steady_state.hpp"

using namespace lane_emden;

namespace {

constexpr double pi = 3.14159265358979323846;

// Classical RK4 in tau for the planar system, used only as a cross-check.
std::array<double, 2> integrate_tau(std::array<double, 2> v, double tau0, double tau1, int steps,
                                    int d, double gamma) {
  const double h = (tau1 - tau0) / steps;
  auto f = [&](const std::array<double, 2>& x) { return vector_field(x[0], x[1], d, gamma); };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(v);
    const auto k2 = f({v[0] + 0.5 * h * k1[0], v[1] + 0.5 * h * k1[1]});
    const auto k3 = f({v[0] + 0.5 * h * k2[0], v[1] + 0.5 * h * k2[1]});
    const auto k4 = f({v[0] + h * k3[0], v[1] + h * k3[1]});
    for (int j = 0; j < 2; ++j) v[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return v;
}

}  // namespace

TEST_CASE("vector field values") {
  const auto f0 = vector_field(0.0, 0.0, 3, 1.3);
  CHECK(f0[0] == 0.0);
  CHECK(f0[1] == 0.0);
  const auto f = vector_field(1.0, 1.0, 3, 1.0);
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(4.0 * pi - 1.0));
  CHECK_THROWS_AS(vector_field(1.0, 1.0, 3, 2.0), InvalidArgument);
  CHECK_THROWS_AS(vector_field(1.0, 1.0, 3, 0.9), InvalidArgument);
  CHECK_THROWS_AS(vector_field(-1.0, 1.0, 3, 1.2), InvalidArgument);
}

TEST_CASE("fixed points") {
  const FixedPoints fp = fixed_points(3, 1.0);
  CHECK(fp.v_star.v1 == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-15));
  CHECK(fp.v_star.v2 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(fp.origin.v1 == 0.0);
  CHECK_THROWS_AS(fixed_points(3, 1.4), InvalidArgument);
  CHECK_THROWS_AS(fixed_points(3, 4.0 / 3.0), InvalidArgument);

  // Property: F(v*) = 0 and v1* is the singular amplitude.
  for (int d : {3, 4, 5, 6}) {
    const double top = stability_threshold(d);
    for (int k = 0; k < 50; ++k) {
      const double g = 1.0 + (top - 1.0) * k / 50.0;
      const FixedPoints p = fixed_points(d, g);
      CHECK(p.v_star.v1 > 0.0);
      CHECK(p.v_star.v2 > 0.0);
      const auto f = vector_field(p.v_star.v1, p.v_star.v2, d, g);
      CHECK(std::hypot(f[0], f[1]) <= 1e-12);
      CHECK(p.v_star.v1 == doctest::Approx(singular_amplitude(d, g)).epsilon(1e-14));
    }
  }
}

TEST_CASE("Jacobian spectrum against a dense eigensolver") {
  const FixedPointReport r = jacobian_spectrum(3, 1.0);
  CHECK(std::abs(r.lambda_plus - std::complex<double>(-0.5, std::sqrt(7.0) / 2.0)) <= 1e-12);
  CHECK(std::abs(r.lambda_minus - std::complex<double>(-0.5, -std::sqrt(7.0) / 2.0)) <= 1e-12);
  CHECK(r.exponentially_stable);
  CHECK(jacobian_spectrum(3, 1.1).lambda_plus.real() < 0.0);

  for (int d = 3; d <= 9; ++d) {
    const double top = stability_threshold(d);
    for (int k = 0; k < 40; ++k) {
      const double g = 1.0 + (top - 1.0) * (k + 0.5) / 40.0;
      CAPTURE(d);
      CAPTURE(g);
      const FixedPointReport rep = jacobian_spectrum(d, g);
      // Analytic Jacobian vs centered differences of F.
      const auto jac = vector_field_jacobian(rep.v1_star, rep.v2_star, d, g);
      const double h = 1e-6 * rep.v1_star;
      const auto fp = vector_field(rep.v1_star + h, rep.v2_star, d, g);
      const auto fm = vector_field(rep.v1_star - h, rep.v2_star, d, g);
      CHECK(jac[0][0] == doctest::Approx((fp[0] - fm[0]) / (2 * h)).epsilon(1e-6));
      CHECK(jac[1][0] == doctest::Approx((fp[1] - fm[1]) / (2 * h)).epsilon(1e-6));

      Eigen::Matrix2d m;
      m << jac[0][0], jac[0][1], jac[1][0], jac[1][1];
      const Eigen::Vector2cd ev = Eigen::EigenSolver<Eigen::Matrix2d>(m).eigenvalues();
      const double scale = 1.0 + std::abs(rep.lambda_plus);
      const double e1 = std::min(std::abs(ev[0] - rep.lambda_plus), std::abs(ev[1] - rep.lambda_plus));
      const double e2 = std::min(std::abs(ev[0] - rep.lambda_minus), std::abs(ev[1] - rep.lambda_minus));
      CHECK(e1 <= 1e-10 * scale);
      CHECK(e2 <= 1e-10 * scale);
      CHECK((rep.lambda_plus + rep.lambda_minus).real() ==
            doctest::Approx(m.trace()));
      // Stability criterion.
      CHECK(rep.exponentially_stable == (g < support_threshold(d)));
    }
  }
}

TEST_CASE("Dulac divergence") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  for (int d : {3, 4, 5}) {
    for (double g : {1.0, 1.05, 0.5 * (1.0 + support_threshold(d))}) {
      for (int i = 0; i < 1000; ++i) {
        const double v1 = u(rng), v2 = u(rng);
        const double div = dulac_divergence(v1, d, g);
        CHECK(div < 0.0);
        if (i % 50 == 0) {
          // div(v1^{-(2-g)} F) by centered differences.
          auto gfield = [&](double a, double b) {
            const auto f = vector_field(a, b, d, g);
            const double s = std::pow(a, -(2.0 - g));
            return std::array<double, 2>{s * f[0], s * f[1]};
          };
          const double h1 = 1e-5 * v1, h2 = 1e-5 * v2;
          const double fd = (gfield(v1 + h1, v2)[0] - gfield(v1 - h1, v2)[0]) / (2 * h1) +
                            (gfield(v1, v2 + h2)[1] - gfield(v1, v2 - h2)[1]) / (2 * h2);
          CHECK(div == doctest::Approx(fd).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("Buchdahl box") {
  const PhaseBox b = buchdahl_box(3, 1.0);
  CHECK(b.v1_max == doctest::Approx(3.0 / (2.0 * pi)));
  const Profile p = integrate_gas_profile({3, 1.0, 1.0}, kDefaultTol, 20.0);
  CHECK(profile_to_phase(p, 10.0).v1 <= 3.0 / (2.0 * pi));
  // u2 bound needs d > 2/(2 - gamma).
  CHECK(std::isinf(buchdahl_box(3, 1.5).v2_max));
  CHECK(std::isfinite(buchdahl_box(3, 1.2).v2_max));

  for (int d : {3, 4, 5})
    for (double g : {1.0, 1.2, 1.5, 1.8})
      for (double rho0 : {0.3, 1.0, 10.0, 1e3}) {
        const PhaseBox box = buchdahl_box(d, g);
        for (const PhaseState& s : phase_trajectory(integrate_gas_profile({d, g, rho0}))) {
          CHECK(s.v1 >= 0.0);
          CHECK(s.v1 <= box.v1_max * (1.0 + 1e-9));
          CHECK(s.v2 <= box.v2_max * (1.0 + 1e-9));
        }
      }
}

TEST_CASE("phase map of profiles") {
  for (double g : {1.0, 1.3}) {
    const StarConfig c{3, g, 4.0};
    const Profile p = integrate_gas_profile(c);
    const double e = 2.0 / (2.0 - g);
    const double r1 = p.radius()[1];
    const PhaseState s = profile_to_phase(p, r1);
    CHECK(s.v1 / (std::pow(r1, e) * c.rho_center) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s.v2 / (std::pow(r1, e) * c.rho_center * 4.0 * pi / 3.0) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s.tau == doctest::Approx(std::log(r1)));
    CHECK_THROWS_AS(profile_to_phase(p, 0.0), InvalidArgument);

    // Pushforward agrees with integrating F in tau from the small-r asymptotics.
    const double tau0 = std::log(1e-4);
    const double r0 = std::exp(tau0);
    std::array<double, 2> v{std::pow(r0, e) * c.rho_center,
                            std::pow(r0, e) * c.rho_center * 4.0 * pi / 3.0};
    v = integrate_tau(v, tau0, 0.0, 40000, 3, g);
    const PhaseState at1 = profile_to_phase(p, 1.0);
    CHECK(at1.v1 == doctest::Approx(v[0]).epsilon(1e-5));
    CHECK(at1.v2 == doctest::Approx(v[1]).epsilon(1e-5));
  }
  CHECK_THROWS_AS(phase_trajectory(integrate_gas_profile({3, 2.0, 1.0})), InvalidArgument);
}

TEST_CASE("singular star is the fixed point") {
  for (int d : {3, 4, 5})
    for (double g : {1.0, 1.1, 1.2}) {
      const ClosedFormStar s = singular_star(d, g);
      std::vector<double> radii;
      for (int i = 0; i <= 40; ++i) radii.push_back(std::pow(10.0, -2.0 + 0.1 * i));
      const FixedPoints fp = fixed_points(d, g);
      for (const PhaseState& st : phase_trajectory(s.sample(radii))) {
        CHECK(st.v1 == doctest::Approx(fp.v_star.v1).epsilon(1e-13));
        CHECK(st.v2 == doctest::Approx(fp.v_star.v2).epsilon(1e-13));
      }
    }
}

TEST_CASE("tail convergence") {
  const Profile p11 = integrate_gas_profile({3, 1.1, 1.0}, kDefaultTol, 1e3);
  const TailFit fit = tail_convergence_rate(p11);
  const double v1s = fixed_points(3, 1.1).v_star.v1;
  CHECK(fit.exponent > 0.0);
  CHECK(fit.samples >= 8);
  CHECK(fit.terminal_deviation < std::abs(profile_to_phase(p11, 1.0).v1 - v1s));

  const Profile p1 = integrate_gas_profile({3, 1.0, 1.0}, kDefaultTol, 1e3);
  CHECK(profile_to_phase(p1, 1e3).v2 == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(tail_convergence_rate(p1).exponent > 0.0);

  CHECK_THROWS_AS(tail_convergence_rate(integrate_gas_profile({3, 1.5, 1.0})), InvalidArgument);
  const std::vector<double> few{1.0, 50.0, 100.0};
  CHECK_THROWS_AS(tail_convergence_rate(singular_star(3, 1.0).sample(few)), InvalidArgument);
}

TEST_CASE("radius limit") {
  CHECK(radius_limit(3, 1.0) == doctest::Approx(std::sqrt(1.0 / (2.0 * pi))).epsilon(1e-14));
  CHECK(radius_limit(3, 1.0) == doctest::Approx(0.39894).epsilon(1e-4));
  CHECK_THROWS_AS(radius_limit(3, 1.2), InvalidArgument);
  // Scaled radius equals the direct liquid radius.
  const Profile base = integrate_gas_profile({3, 1.1, 1.0}, kDefaultTol, 1e3);
  for (double kappa : {1e2, 1e4})
    CHECK(scaled_liquid_radius(base, kappa) ==
          doctest::Approx(*integrate_liquid_profile({3, 1.1, kappa}).liquid_radius()).epsilon(1e-7));
}
