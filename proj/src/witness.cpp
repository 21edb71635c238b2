#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"
#include "lane_emden/spectral.hpp"

namespace lane_emden {

namespace {

void check_case(int d, double gamma, WitnessCase which) {
  const double lower = support_threshold(d);
  const double upper = stability_threshold(d);
  bool ok = false;
  switch (which) {
    case WitnessCase::Constant:
      ok = gamma > lower + kGammaMatchTol && gamma < upper - kGammaMatchTol;
      break;
    case WitnessCase::ScaledFamily:
      ok = is_critical_index(d, gamma);
      break;
    case WitnessCase::CappedPower:
      ok = gamma < lower - kGammaMatchTol;
      break;
  }
  if (!ok)
    throw InvalidArgument(fmt::format("case/gamma mismatch: case {} does not apply to d = {}, gamma = {}",
                                      static_cast<int>(which), d, gamma));
}

TestFunction constant_function() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, {}};
}

TestFunction capped_power(double eps, double a) {
  const double cap = std::pow(eps, -a);
  return {[=](double y) { return y <= eps ? cap : std::pow(y, -a); },
          [=](double y) { return y <= eps ? 0.0 : -a * std::pow(y, -a - 1.0); },
          {eps}};
}

// Quadratic through three points: value, first and second derivative at x.
struct LocalQuadratic {
  double slope;
  double curvature;
};

LocalQuadratic quadratic_at(double x, std::array<double, 3> xs, std::array<double, 3> fs) {
  // Newton form: f0 + f01 (t - x0) + f012 (t - x0)(t - x1).
  const double f01 = (fs[1] - fs[0]) / (xs[1] - xs[0]);
  const double f12 = (fs[2] - fs[1]) / (xs[2] - xs[1]);
  const double f012 = (f12 - f01) / (xs[2] - xs[0]);
  return {f01 + f012 * ((x - xs[0]) + (x - xs[1])), 2.0 * f012};
}

}  // namespace

WitnessResult instability_witness(const Profile& profile, WitnessCase which) {
  const int d = profile.config().d;
  const double gamma = profile.config().gamma;
  check_case(d, gamma, which);
  const SturmLiouvilleData data = build_sl_data(profile);
  const TestFunction one = constant_function();

  switch (which) {
    case WitnessCase::Constant:
      return {which, quadratic_form(data, one, one), 0.0, 0.0};
    case WitnessCase::ScaledFamily: {
      // chi_k = k^{d/(d+2)} for chi = 1, so Q scales by k^{2d/(d+2)}.
      const double kappa = profile.config().rho_center;
      return {which, std::pow(kappa, 2.0 * d / (d + 2.0)) * quadratic_form(data, one, one), 0.0,
              0.0};
    }
    case WitnessCase::CappedPower: {
      const double a = 0.5 * (d - 2.0 * gamma / (2.0 - gamma));
      const double r = data.radius;
      WitnessResult first{which, 0.0, 0.0, a};
      for (double eps : {r / 100.0, r / 10.0, r / 1000.0}) {
        const TestFunction chi = capped_power(eps, a);
        const WitnessResult res{which, quadratic_form(data, chi, chi), eps, a};
        if (res.value < 0.0) return res;
        if (first.epsilon == 0.0) first = res;
      }
      return first;
    }
  }
  throw InvalidArgument("unknown witness case");
}

StrongFormResidual eigen_residual_strongform(const SturmLiouvilleData& data,
                                             const SpectralResult& result) {
  const auto& y = result.nodes;
  const auto& chi = result.chi;
  const std::size_t n = y.size();
  if (n < 3 || chi.size() != n) throw InvalidArgument("eigenpair needs at least 3 nodes");

  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const LocalQuadratic lq =
        quadratic_at(y[i], {y[i - 1], y[i], y[i + 1]}, {chi[i - 1], chi[i], chi[i + 1]});
    const std::array<double, 4> terms{-data.p_slope(y[i]) * lq.slope,
                                      -data.p(y[i]) * lq.curvature, data.q(y[i]) * chi[i],
                                      -result.mu_star * data.weight(y[i]) * chi[i]};
    double sum = 0.0;
    for (double t : terms) {
      sum += t;
      scale = std::max(scale, std::abs(t));
    }
    worst = std::max(worst, std::abs(sum));
  }

  const LocalQuadratic tail =
      quadratic_at(y[n - 1], {y[n - 3], y[n - 2], y[n - 1]}, {chi[n - 3], chi[n - 2], chi[n - 1]});
  StrongFormResidual out;
  out.interior = scale > 0.0 ? worst / scale : 0.0;
  out.chi_at_radius = chi.back();
  out.robin_defect = std::abs(data.d * chi.back() + y.back() * tail.slope);
  return out;
}

}  // namespace lane_emden
