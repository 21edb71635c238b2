#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "lane_emden/errors.hpp"
#include "lane_emden/harness.hpp"
#include "lane_emden/io.hpp"
#include "lane_emden/phase_portrait.hpp"

using namespace lane_emden;
namespace fs = std::filesystem;

namespace {

constexpr double pi = 3.14159265358979323846;

RunSpec range(double gamma, double lo, double hi, int points, int mesh = kDefaultMeshSize) {
  RunSpec s;
  s.d = 3;
  s.gamma = gamma;
  s.rho0_min = lo;
  s.rho0_max = hi;
  s.points = points;
  s.mesh_size = mesh;
  return s;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lane_emden_test_harness";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("density grid") {
  RunSpec s = range(1.2, 2.0, 2000.0, 4);
  const std::vector<double> g = density_grid(s);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == doctest::Approx(20.0));
  CHECK(g[2] == doctest::Approx(200.0));
  CHECK(g[3] == 2000.0);
  s.log_spacing = false;
  const std::vector<double> lin = density_grid(s);
  CHECK(lin[1] == doctest::Approx(668.0));
  for (std::size_t i = 1; i < lin.size(); ++i) CHECK(lin[i] > lin[i - 1]);

  CHECK_THROWS_AS(density_grid(range(1.2, 2.0, 2000.0, 1)), InvalidArgument);
  CHECK_THROWS_AS(density_grid(range(1.2, 5.0, 2.0, 4)), InvalidArgument);
  RunSpec missing;
  missing.points = 4;
  CHECK_THROWS_AS(density_grid(missing), InvalidArgument);
}

TEST_CASE("profile runs") {
  RunSpec s;
  s.gamma = 1.2;
  s.rho0 = 32.0;
  const ProfileRun run = run_profile(s);
  REQUIRE(run.diagnostics.liquid_radius);
  CHECK(*run.diagnostics.liquid_radius == doctest::Approx(std::sqrt(27.0 / (32.0 * pi))).epsilon(1e-6));
  CHECK(run.diagnostics.max_decay_slack <= 0.0);
  CHECK(run.diagnostics.max_pohozaev <= 1e-5);
  CHECK(run.diagnostics.total_mass > 0.0);
  const nlohmann::json j = to_json(run.diagnostics);
  for (const char* key : {"max_decay_slack", "max_pohozaev_residual", "R", "gas_radius", "M_total"})
    CHECK(j.contains(key));
  CHECK(j["gas_radius"].is_null());

  // CSV export.
  const fs::path csv = scratch("profile.csv");
  s.out = csv.string();
  run_profile(s);
  const std::vector<std::string> rows = lines(read_file(csv.string()));
  REQUIRE(rows.size() > 3);
  CHECK(rows[0].rfind("# d=3,gamma=1.2", 0) == 0);
  CHECK(rows[0].find(",R=0.51824122") != std::string::npos);
  CHECK(rows[1] == "r,rho,enthalpy,mass");
  CHECK(rows[2].rfind("0,32,", 0) == 0);

  s.format = OutputFormat::Json;
  s.out = scratch("profile.json").string();
  run_profile(s);
  const nlohmann::json pj = nlohmann::json::parse(read_file(*s.out));
  CHECK(pj["r"].size() == pj["rho"].size());
  CHECK(pj["diagnostics"]["R"].get<double>() == doctest::Approx(0.518241));

  // Gas star with compact support.
  RunSpec gas;
  gas.gamma = 1.5;
  gas.rho0 = 0.5;
  gas.gas = true;
  const ProfileRun g = run_profile(gas);
  REQUIRE(g.diagnostics.gas_radius);
  CHECK(*g.diagnostics.gas_radius > 0.0);
  CHECK(!g.diagnostics.liquid_radius);

  RunSpec one;
  one.rho0 = 1.0;
  CHECK_THROWS_AS(run_profile(one), InvalidArgument);
  CHECK_THROWS_AS(run_profile(RunSpec{}), InvalidArgument);
  RunSpec bad_path = s;
  bad_path.out = (scratch("missing") / "dir" / "x.csv").string();
  CHECK_THROWS_AS(run_profile(bad_path), IoError);
}

TEST_CASE("sweeps") {
  const std::vector<SweepRow> stable = run_sweep(range(1.5, 1.1, 1e3, 8));
  REQUIRE(stable.size() == 8);
  for (std::size_t i = 0; i < stable.size(); ++i) {
    CHECK(stable[i].verdict == RowStatus::Stable);
    CHECK(stable[i].radius > 0.0);
    CHECK(stable[i].total_mass > 0.0);
    if (i > 0) CHECK(stable[i].rho0 > stable[i - 1].rho0);
  }

  // Sweep rows agree with single runs.
  for (const SweepRow& row : {stable[0], stable[5]}) {
    RunSpec single;
    single.gamma = 1.5;
    single.rho0 = row.rho0;
    const ProfileRun run = run_profile(single);
    CHECK(*run.diagnostics.liquid_radius == doctest::Approx(row.radius).epsilon(1e-10));
    CHECK(run.diagnostics.total_mass == doctest::Approx(row.total_mass).epsilon(1e-10));
    CHECK(classify_stability(run.profile).mu_star == doctest::Approx(row.mu_star).epsilon(1e-10));
  }

  // Stability transition along the density axis: exactly one sign change.
  const std::vector<SweepRow> mixed = run_sweep(range(1.25, 1.01, 1e6, 64));
  REQUIRE(mixed.size() == 64);
  CHECK(mixed.front().verdict == RowStatus::Stable);
  CHECK(mixed.back().verdict == RowStatus::Unstable);
  int changes = 0;
  for (std::size_t i = 1; i < mixed.size(); ++i) changes += (mixed[i].mu_star < 0.0) != (mixed[i - 1].mu_star < 0.0);
  CHECK(changes == 1);

  // Large central densities below the support threshold are unstable.
  const std::vector<SweepRow> tail = run_sweep(range(1.1, 1e5, 1e6, 2, 256));
  for (const SweepRow& row : tail) CHECK(row.verdict == RowStatus::Unstable);

  CHECK_THROWS_AS(run_sweep(range(1.2, 1.0, 10.0, 4)), InvalidArgument);
}

TEST_CASE("sweep row isolation and CSV") {
  // A mesh below the minimum fails every eigensolve; rows still come back.
  const std::vector<SweepRow> rows = run_sweep(range(1.2, 2.0, 20.0, 3, 8));
  REQUIRE(rows.size() == 3);
  for (const SweepRow& r : rows) {
    CHECK(r.verdict == RowStatus::Error);
    CHECK(!r.error.empty());
    CHECK(r.radius > 0.0);
  }
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(range(1.3, 1.5, 100.0, 4, 256)));
  write_sweep_csv(b, run_sweep(range(1.3, 1.5, 100.0, 4, 256)));
  CHECK(a.str() == b.str());
  const std::vector<std::string> csv = lines(a.str());
  REQUIRE(csv.size() == 5);
  CHECK(csv[0] == "rho0,R,M,mu_star,verdict");
  CHECK(csv[1].rfind("1.5,", 0) == 0);
  CHECK(csv[4].rfind("100,", 0) == 0);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("critical density") {
  CriticalOptions opts;
  opts.mesh_size = 512;
  const CriticalDensity c = critical_density(3, 1.25, 1.01, 1e6, 1e-3, opts);
  CHECK(c.lower < c.rho0_crit);
  CHECK(c.rho0_crit < c.upper);
  CHECK(c.upper / c.lower - 1.0 <= 1e-3);
  CHECK(c.rho0_crit > 1.01);
  CHECK(c.rho0_crit < 1e6);
  REQUIRE(c.log_widths.size() >= 2);
  for (std::size_t i = 1; i < c.log_widths.size(); ++i)
    CHECK(c.log_widths[i] == doctest::Approx(0.5 * c.log_widths[i - 1]).epsilon(1e-12));
  const auto verdict = [](double rho0) {
    return classify_stability(integrate_liquid_profile({3, 1.25, rho0}), 512).verdict;
  };
  CHECK(verdict(c.lower) == Verdict::Stable);
  CHECK(verdict(c.upper) == Verdict::Unstable);

  CHECK_THROWS_AS(critical_density(3, 1.4, 1.01, 1e6, 1e-3, opts), InvalidArgument);
  CHECK_THROWS_AS(critical_density(3, 1.25, 1.01, 2.0, 1e-3, opts), InvalidArgument);
  CHECK_THROWS_AS(critical_density(3, 1.25, 10.0, 2.0, 1e-3, opts), InvalidArgument);
  CHECK_THROWS_AS(critical_density(3, 1.25, 1.01, 1e6, 0.0, opts), InvalidArgument);
}

TEST_CASE("serialization") {
  const nlohmann::json fp = to_json(jacobian_spectrum(3, 1.0));
  CHECK(fp["v1_star"].get<double>() == doctest::Approx(1.0 / (2.0 * pi)));
  CHECK(fp["lambda_im"][0].get<double>() == doctest::Approx(std::sqrt(7.0) / 2.0));
  CHECK(fp["stable"].get<bool>());

  const Profile p = integrate_liquid_profile({3, 1.5, 2.0});
  const SpectralResult res = classify_stability(p, 256);
  const nlohmann::json sj = to_json(res, 1e-6);
  for (const char* key : {"mu_star", "lambda", "verdict", "marginal", "mesh_size", "robin_defect"})
    CHECK(sj.contains(key));
  CHECK(sj["lambda"].is_null());
  CHECK(sj["verdict"] == "Stable");
  CHECK(sj["mesh_size"] == 256);

  const SpectralResult un = classify_stability(integrate_liquid_profile({3, 1.25, 1e4}), 256);
  const nlohmann::json uj = to_json(un, 0.0);
  CHECK(uj["verdict"] == "Unstable");
  CHECK(uj["lambda"].get<double>() == doctest::Approx(std::sqrt(-un.mu_star)));

  std::ostringstream eig, phase;
  write_eigenfunction_csv(eig, res);
  CHECK(lines(eig.str()).size() == 258);
  CHECK(lines(eig.str())[0] == "y,chi");
  write_phase_csv(phase, phase_trajectory(p));
  CHECK(lines(phase.str())[0] == "tau,v1,v2");

  CHECK_THROWS_AS(read_file((scratch("missing") / "nope.json").string()), IoError);
}

TEST_CASE("verify suite") {
  const std::vector<std::string>& names = verify_suite_names();
  CHECK(names.size() == 10);
  for (const char* n : {"decay", "pohozaev", "buchdahl", "explicit", "singular", "fixed-point", "tail",
                        "radius-limit", "q-symmetry", "strong-form"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK_THROWS_AS(verify_suite({"nonsense"}), InvalidArgument);

  const VerifyReport ok = verify_suite({"explicit", "fixed-point", "singular", "q-symmetry"});
  CHECK(ok.checks.size() == 4);
  CHECK(ok.passed());
  const nlohmann::json j = ok.to_json();
  CHECK(j["passed"].get<bool>());
  CHECK(j["checks"][0]["name"] == "explicit");
  CHECK(j["checks"][0]["value"].get<double>() <= 1e-6);
}
