#include "lane_emden/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "lane_emden/closed_form.hpp"
#include "lane_emden/errors.hpp"
#include "lane_emden/io.hpp"
#include "lane_emden/phase_portrait.hpp"

namespace lane_emden {

std::vector<double> density_grid(const RunSpec& spec) {
  if (!spec.rho0_min || !spec.rho0_max)
    throw InvalidArgument("a density range needs --rho0-min and --rho0-max");
  const double lo = *spec.rho0_min;
  const double hi = *spec.rho0_max;
  if (spec.points < 2) throw InvalidArgument("a density range needs at least 2 points");
  if (!(lo > 0.0) || !(hi > lo))
    throw InvalidArgument(fmt::format("empty density range [{}, {}]", lo, hi));
  std::vector<double> grid(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    const double t = static_cast<double>(i) / (spec.points - 1);
    grid[i] = spec.log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                               : lo + t * (hi - lo);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ProfileDiagnostics diagnose(const Profile& profile) {
  ProfileDiagnostics out{-std::numeric_limits<double>::infinity(), 0.0, profile.liquid_radius(),
                         profile.gas_radius(), profile.total_mass()};
  const auto& c = profile.columns();
  for (std::size_t i = 1; i < profile.size(); ++i) {
    const double bound = decay_bound(profile.config(), c.radius[i]);
    out.max_decay_slack = std::max(out.max_decay_slack, (c.rho[i] - bound) / bound);
  }
  for (const PohozaevResidual& r : pohozaev_residuals(profile))
    out.max_pohozaev = std::max(out.max_pohozaev, std::abs(r.normalized()));
  return out;
}

nlohmann::json to_json(const ProfileDiagnostics& d) {
  nlohmann::json j = {{"max_decay_slack", d.max_decay_slack},
                      {"max_pohozaev_residual", d.max_pohozaev},
                      {"R", nullptr},
                      {"gas_radius", nullptr},
                      {"M_total", d.total_mass}};
  if (d.liquid_radius) j["R"] = *d.liquid_radius;
  if (d.gas_radius) j["gas_radius"] = *d.gas_radius;
  return j;
}

ProfileRun run_profile(const RunSpec& spec) {
  if (!spec.rho0) throw InvalidArgument("profile needs --rho0");
  const StarConfig config{spec.d, spec.gamma, *spec.rho0};
  Profile profile = spec.gas ? integrate_gas_profile(config, spec.tol, spec.r_max)
                             : (validate_liquid(config), integrate_liquid_profile(config, spec.tol));
  ProfileDiagnostics diagnostics = diagnose(profile);
  if (spec.out) {
    std::ostringstream ss;
    if (spec.format == OutputFormat::Csv) {
      write_profile_csv(ss, profile);
    } else {
      const auto& c = profile.columns();
      nlohmann::json j = {{"d", config.d},
                          {"gamma", config.gamma},
                          {"rho0", config.rho_center},
                          {"diagnostics", to_json(diagnostics)},
                          {"r", c.radius},
                          {"rho", c.rho},
                          {"enthalpy", c.enthalpy},
                          {"mass", c.mass}};
      ss << j.dump(2) << '\n';
    }
    write_file(*spec.out, ss.str());
  }
  return {std::move(profile), diagnostics};
}

const char* to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Stable: return "Stable";
    case RowStatus::Unstable: return "Unstable";
    case RowStatus::Marginal: return "Marginal";
    case RowStatus::Error: return "Error";
  }
  return "Error";
}

std::vector<SweepRow> run_sweep(const RunSpec& spec) {
  const std::vector<double> grid = density_grid(spec);
  if (grid.front() <= 1.0)
    throw InvalidArgument("sweep densities must all exceed 1 (no liquid truncation otherwise)");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double rho0 : grid) {
    SweepRow row{rho0, nan, nan, nan, RowStatus::Error, {}};
    try {
      const Profile profile = integrate_liquid_profile({spec.d, spec.gamma, rho0}, spec.tol);
      row.radius = *profile.liquid_radius();
      row.total_mass = profile.total_mass();
      const SpectralResult res = classify_stability(profile, spec.mesh_size, spec.tol_eig);
      row.mu_star = res.mu_star;
      row.verdict = res.marginal ? RowStatus::Marginal
                    : res.verdict == Verdict::Unstable ? RowStatus::Unstable
                                                        : RowStatus::Stable;
    } catch (const std::exception& e) {
      row.verdict = RowStatus::Error;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "rho0,R,M,mu_star,verdict\n";
  for (const SweepRow& r : rows)
    os << format_number(r.rho0) << ',' << format_number(r.radius) << ','
       << format_number(r.total_mass) << ',' << format_number(r.mu_star) << ','
       << to_string(r.verdict) << '\n';
}

CriticalDensity critical_density(int d, double gamma, double rho_lo, double rho_hi,
                                 double tol_rho, const CriticalOptions& options) {
  validate_dimension_and_index(d, gamma);
  if (!(gamma < stability_threshold(d) - kGammaMatchTol))
    throw InvalidArgument(fmt::format(
        "stable regime: gamma = {} >= 2(d-1)/d = {}, no sign change of mu*", gamma,
        stability_threshold(d)));
  if (!(rho_lo > 1.0) || !(rho_hi > rho_lo))
    throw InvalidArgument(fmt::format("invalid bracket [{}, {}]", rho_lo, rho_hi));
  if (!(tol_rho > 0.0)) throw InvalidArgument("tol_rho must be positive");
  if (options.scan_points < 2) throw InvalidArgument("pre-scan needs at least 2 points");

  auto unstable = [&](double rho0) {
    const Profile profile = integrate_liquid_profile({d, gamma, rho0}, options.tol);
    return classify_stability(profile, options.mesh_size, options.tol_eig).verdict ==
           Verdict::Unstable;
  };

  const int n = options.scan_points;
  std::vector<double> xs(n);
  std::vector<bool> flags(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::exp(std::log(rho_lo) + (std::log(rho_hi) - std::log(rho_lo)) * i / (n - 1));
    if (i == 0) xs[i] = rho_lo;
    if (i == n - 1) xs[i] = rho_hi;
    flags[i] = unstable(xs[i]);
  }
  if (flags.front() == flags.back())
    throw InvalidArgument(fmt::format("same-sign bracket: mu* is {} at both {} and {}",
                                      flags.front() ? "negative" : "non-negative", rho_lo, rho_hi));
  std::vector<std::size_t> changes;
  for (int i = 0; i + 1 < n; ++i)
    if (flags[i] != flags[i + 1]) changes.push_back(i);
  if (changes.size() != 1) {
    std::string where;
    for (std::size_t i : changes) where += fmt::format(" [{:.6g}, {:.6g}]", xs[i], xs[i + 1]);
    throw NumericalFailure(
        fmt::format("non-monotone sign of mu*: {} sign changes in bracket:{}", changes.size(), where));
  }
  if (flags.front())
    throw NumericalFailure("mu* is negative at the low end and non-negative at the high end");

  CriticalDensity out{0.0, xs[changes[0]], xs[changes[0] + 1], {}};
  while (out.upper / out.lower - 1.0 > tol_rho) {
    const double mid = std::sqrt(out.lower * out.upper);
    (unstable(mid) ? out.upper : out.lower) = mid;
    out.log_widths.push_back(std::log(out.upper / out.lower));
  }
  out.rho0_crit = std::sqrt(out.lower * out.upper);
  return out;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& c : checks)
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"value", c.value},
                    {"threshold", c.threshold},
                    {"detail", c.detail}});
  return {{"passed", passed()}, {"checks", list}};
}

namespace {

struct BatteryCase {
  int d;
  double gamma;
  double rho0;
};

std::vector<BatteryCase> standard_battery() {
  std::vector<BatteryCase> cases;
  for (int d : {3, 4, 5})
    for (double g : {1.0, 1.2, 1.5, 2.0})
      for (double rho0 : {1.0, 10.0}) cases.push_back({d, g, rho0});
  return cases;
}

std::string label(const BatteryCase& c) {
  return fmt::format("d={} gamma={} rho0={}", c.d, c.gamma, c.rho0);
}

CheckResult check_decay() {
  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (const BatteryCase& c : standard_battery()) {
    const Profile p = integrate_gas_profile({c.d, c.gamma, c.rho0});
    const double slack = diagnose(p).max_decay_slack;
    if (slack > worst) {
      worst = slack;
      where = label(c);
    }
  }
  const double allowed = 10.0 * kDefaultTol;
  return {"decay", worst <= allowed, worst, allowed, "max (rho - bound)/bound at " + where};
}

CheckResult check_pohozaev() {
  double worst = 0.0;
  std::string where;
  for (const BatteryCase& c : standard_battery()) {
    const double r = diagnose(integrate_gas_profile({c.d, c.gamma, c.rho0})).max_pohozaev;
    if (r > worst) {
      worst = r;
      where = label(c);
    }
  }
  return {"pohozaev", worst <= 1e-5, worst, 1e-5, "max normalized residual at " + where};
}

CheckResult check_buchdahl() {
  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (const BatteryCase& c : standard_battery()) {
    if (c.gamma >= 2.0) continue;
    const PhaseBox box = buchdahl_box(c.d, c.gamma);
    for (const PhaseState& s : phase_trajectory(integrate_gas_profile({c.d, c.gamma, c.rho0}))) {
      double excess = s.v1 / box.v1_max - 1.0;
      if (std::isfinite(box.v2_max)) excess = std::max(excess, s.v2 / box.v2_max - 1.0);
      if (excess > worst) {
        worst = excess;
        where = label(c);
      }
    }
  }
  const double allowed = 10.0 * kDefaultTol;
  return {"buchdahl", worst <= allowed, worst, allowed, "max relative excess over the box at " + where};
}

CheckResult check_explicit() {
  const int d = 3;
  const double gamma = support_threshold(d);
  double worst = 0.0;
  for (double rho0 : {1.0, 32.0}) {
    const Profile p = integrate_gas_profile({d, gamma, rho0}, kDefaultTol, 5.0);
    const ClosedFormStar star = explicit_profile_critical(d, rho0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double exact = star.density(p.radius()[i]);
      worst = std::max(worst, std::abs(p.rho()[i] - exact) / exact);
    }
  }
  const double radius = *integrate_liquid_profile({d, gamma, 32.0}).liquid_radius();
  const double r_err = std::abs(radius / std::sqrt(27.0 / (32.0 * kPi)) - 1.0);
  const double value = std::max(worst, r_err);
  return {"explicit", value <= 1e-6, value, 1e-6,
          fmt::format("profile rel. error {:.3g}, radius rel. error {:.3g}", worst, r_err)};
}

CheckResult check_singular() {
  double worst = 0.0;
  for (int d : {3, 4, 5})
    for (double gamma : {1.0, 1.05, 1.1, 1.2, 1.3}) {
      if (!(2.0 * (d - 1.0) - d * gamma > 0.0)) continue;
      const ClosedFormStar s = singular_star(d, gamma);
      for (double r : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(steady_state_residual(d, gamma, r, s.density(r),
                                                               s.density_slope(r),
                                                               s.density_curvature(r))));
    }
  return {"singular", worst <= 1e-12, worst, 1e-12, "max normalized ODE residual"};
}

CheckResult check_fixed_point() {
  double worst = 0.0;
  for (int d : {3, 4, 5}) {
    const double top = stability_threshold(d);
    for (int k = 0; k < 50; ++k) {
      const double gamma = 1.0 + (top - 1.0) * k / 50.0;
      const FixedPoints fp = fixed_points(d, gamma);
      const auto f = vector_field(fp.v_star.v1, fp.v_star.v2, d, gamma);
      worst = std::max(worst, std::hypot(f[0], f[1]));
    }
  }
  const FixedPointReport r = jacobian_spectrum(3, 1.0);
  const double ref = std::max({std::abs(r.v1_star - 1.0 / (2.0 * kPi)), std::abs(r.v2_star - 2.0),
                               std::abs(r.lambda_plus - std::complex<double>(-0.5, std::sqrt(7.0) / 2)),
                               std::abs(r.lambda_minus - std::complex<double>(-0.5, -std::sqrt(7.0) / 2))});
  const double value = std::max(worst, ref);
  return {"fixed-point", value <= 1e-12, value, 1e-12,
          fmt::format("max |F(v*)| {:.3g}; d=3 gamma=1 reference defect {:.3g}", worst, ref)};
}

CheckResult check_tail() {
  double worst = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  for (double gamma : {1.0, 1.1}) {
    const Profile p = integrate_gas_profile({3, gamma, 1.0}, kDefaultTol, 1e3);
    const TailFit fit = tail_convergence_rate(p);
    worst = std::max(worst, fit.terminal_deviation / fixed_points(3, gamma).v_star.v1);
    min_rate = std::min(min_rate, fit.exponent);
  }
  return {"tail", worst <= 1e-2 && min_rate > 0.0, worst, 1e-2,
          fmt::format("max |u1(r_max) - v1*|/v1* = {:.4g}, min fitted exponent {:.3g}", worst,
                      min_rate)};
}

CheckResult check_radius_limit() {
  const double r_inf = radius_limit(3, 1.1);
  std::vector<double> errs;
  for (double kappa : {1e2, 1e3, 1e4, 1e5, 1e6})
    errs.push_back(std::abs(*integrate_liquid_profile({3, 1.1, kappa}).liquid_radius() - r_inf) /
                   r_inf);
  const bool decreasing = std::is_sorted(errs.rbegin(), errs.rend());
  std::string detail = "relative errors at kappa = 1e2..1e6:";
  for (double e : errs) detail += fmt::format(" {:.4g}", e);
  return {"radius-limit", errs.back() <= 0.05 && decreasing, errs.back(), 0.05, detail};
}

CheckResult check_q_symmetry() {
  const Profile p = integrate_liquid_profile({3, 1.25, 10.0});
  const SturmLiouvilleData data = build_sl_data(p);
  const std::vector<double> nodes = graded_mesh(data.radius, 256);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(nodes.size()), b(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const double ab = quadratic_form(data, nodes, a, b);
    const double ba = quadratic_form(data, nodes, b, a);
    const double scale = std::max(std::abs(quadratic_form(data, nodes, a, a)),
                                  std::abs(quadratic_form(data, nodes, b, b)));
    worst = std::max(worst, std::abs(ab - ba) / scale);
  }
  return {"q-symmetry", worst <= 1e-12, worst, 1e-12, "max |Q[a,b] - Q[b,a]| / max Q[x,x]"};
}

CheckResult check_strong_form() {
  const Profile p = integrate_liquid_profile({3, 1.5, 2.0});
  const SturmLiouvilleData data = build_sl_data(p);
  const StrongFormResidual coarse =
      eigen_residual_strongform(data, smallest_eigenpair(assemble(data, 2048)));
  const StrongFormResidual fine =
      eigen_residual_strongform(data, smallest_eigenpair(assemble(data, 4096)));
  const double allowed = 1e-4 * std::abs(fine.chi_at_radius) * data.d / data.radius;
  const bool ok = fine.robin_defect <= allowed && fine.interior <= 0.5 * coarse.interior;
  return {"strong-form", ok, fine.robin_defect, allowed,
          fmt::format("interior residual {:.3g} (M=2048) -> {:.3g} (M=4096)", coarse.interior,
                      fine.interior)};
}

const std::map<std::string, std::function<CheckResult()>>& registry() {
  static const std::map<std::string, std::function<CheckResult()>> r = {
      {"decay", check_decay},           {"pohozaev", check_pohozaev},
      {"buchdahl", check_buchdahl},     {"explicit", check_explicit},
      {"singular", check_singular},     {"fixed-point", check_fixed_point},
      {"tail", check_tail},             {"radius-limit", check_radius_limit},
      {"q-symmetry", check_q_symmetry}, {"strong-form", check_strong_form},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "decay",    "pohozaev",     "buchdahl",   "explicit",   "singular",
      "fixed-point", "tail", "radius-limit", "q-symmetry", "strong-form"};
  return names;
}

VerifyReport verify_suite(const std::vector<std::string>& selection) {
  const std::vector<std::string>& names = selection.empty() ? verify_suite_names() : selection;
  for (const std::string& n : names)
    if (!registry().count(n)) throw InvalidArgument(fmt::format("unknown check '{}'", n));
  VerifyReport report;
  for (const std::string& n : names) {
    try {
      report.checks.push_back(registry().at(n)());
    } catch (const std::exception& e) {
      report.checks.push_back({n, false, std::numeric_limits<double>::quiet_NaN(), 0.0,
                               std::string("error: ") + e.what()});
    }
  }
  return report;
}

}  // namespace lane_emden
