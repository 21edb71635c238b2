// lane-emden: profiles, stability sweeps, critical densities and the
// verification suite from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 numerical (or I/O) failure,
// 3 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lane_emden/errors.hpp"
#include "lane_emden/harness.hpp"
#include "lane_emden/io.hpp"
#include "lane_emden/phase_portrait.hpp"
#include "lane_emden/spectral.hpp"
#include "lane_emden/steady_state.hpp"

using namespace lane_emden;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

struct Cli {
  RunSpec spec;
  double rho0 = 0.0, rho0_min = 0.0, rho0_max = 0.0;
  std::string out, format = "csv", config, phase_out, eig_out;
  double tol_rho = 1e-3;
  std::vector<std::string> suites;
};

// Values from the JSON config file fill every option the command line left unset.
void apply_config(CLI::App& app, const std::string& path) {
  const json cfg = json::parse(read_file(path));
  if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InvalidArgument(fmt::format("unknown config key '{}'", key));
    }
    if (opt->count() > 0) continue;
    std::vector<std::string> tokens;
    if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      tokens.push_back("true");
    } else if (value.is_string()) {
      tokens.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      for (const auto& v : value) tokens.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      tokens.push_back(value.dump());
    }
    opt->add_result(tokens);
    opt->run_callback();
  }
}

void emit(const Cli& cli, const std::string& content) {
  if (cli.out.empty())
    std::cout << content;
  else
    write_file(cli.out, content);
}

int cmd_profile(const Cli& cli) {
  RunSpec spec = cli.spec;
  if (!cli.out.empty()) spec.out = cli.out;
  const ProfileRun run = run_profile(spec);
  if (!cli.phase_out.empty()) {
    std::ostringstream ss;
    write_phase_csv(ss, phase_trajectory(run.profile));
    write_file(cli.phase_out, ss.str());
  }
  std::cout << to_json(run.diagnostics).dump(2) << '\n';
  return 0;
}

int cmd_scan(const Cli& cli) {
  const std::vector<SweepRow> rows = run_sweep(cli.spec);
  std::ostringstream ss;
  if (cli.spec.format == OutputFormat::Csv) {
    write_sweep_csv(ss, rows);
  } else {
    json arr = json::array();
    for (const SweepRow& r : rows) {
      json row = {{"rho0", r.rho0}, {"R", r.radius}, {"M", r.total_mass},
                  {"mu_star", r.mu_star}, {"verdict", to_string(r.verdict)}};
      if (!r.error.empty()) row["error"] = r.error;
      arr.push_back(row);
    }
    ss << arr.dump(2) << '\n';
  }
  emit(cli, ss.str());
  return 0;
}

int cmd_stability(const Cli& cli) {
  if (!cli.spec.rho0) throw InvalidArgument("stability needs --rho0");
  const StarConfig config{cli.spec.d, cli.spec.gamma, *cli.spec.rho0};
  validate_liquid(config);
  const Profile profile = integrate_liquid_profile(config, cli.spec.tol);
  const SturmLiouvilleData data = build_sl_data(profile);
  const SpectralResult res = smallest_eigenpair(assemble(data, cli.spec.mesh_size), cli.spec.tol_eig);
  const StrongFormResidual sf = eigen_residual_strongform(data, res);
  if (!cli.eig_out.empty()) {
    std::ostringstream ss;
    write_eigenfunction_csv(ss, res);
    write_file(cli.eig_out, ss.str());
  }
  emit(cli, to_json(res, sf.robin_defect).dump(2) + "\n");
  return 0;
}

int cmd_critical(const Cli& cli) {
  if (!cli.spec.rho0_min || !cli.spec.rho0_max)
    throw InvalidArgument("critical needs --rho0-min and --rho0-max");
  CriticalOptions opts;
  opts.mesh_size = cli.spec.mesh_size;
  opts.tol = cli.spec.tol;
  opts.tol_eig = cli.spec.tol_eig;
  const CriticalDensity c = critical_density(cli.spec.d, cli.spec.gamma, *cli.spec.rho0_min,
                                             *cli.spec.rho0_max, cli.tol_rho, opts);
  const json j = {{"rho0_crit", c.rho0_crit}, {"lower", c.lower}, {"upper", c.upper},
                  {"iterations", c.log_widths.size()}};
  emit(cli, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Cli& cli) {
  std::vector<std::string> selection;
  for (const std::string& s : cli.suites) {
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty() && item != "all") selection.push_back(item);
  }
  const VerifyReport report = verify_suite(selection);
  emit(cli, report.to_json().dump(2) + "\n");
  return report.passed() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane-Emden stars: steady states, phase portrait and linear stability"};
  app.require_subcommand(1);
  app.fallthrough();
  Cli cli;

  app.add_option("--config", cli.config, "JSON file mirroring the flags; flags take precedence");
  app.add_option("--d", cli.spec.d, "Dimension (>= 3)");
  app.add_option("--gamma", cli.spec.gamma, "Adiabatic index in [1, 2]");
  auto* rho0 = app.add_option("--rho0", cli.rho0, "Central density");
  auto* rho_min = app.add_option("--rho0-min", cli.rho0_min, "Lower end of the density range");
  auto* rho_max = app.add_option("--rho0-max", cli.rho0_max, "Upper end of the density range");
  app.add_option("--points", cli.spec.points, "Number of densities in the range");
  app.add_flag("--log,!--linear", cli.spec.log_spacing, "Logarithmic range spacing (default)");
  app.add_option("--mesh", cli.spec.mesh_size, "Finite-element mesh size M");
  app.add_option("--tol", cli.spec.tol, "Integrator relative tolerance");
  app.add_option("--tol-eig", cli.spec.tol_eig, "Eigen-residual tolerance");
  app.add_option("--rmax", cli.spec.r_max, "Cutoff radius for gas profiles");
  app.add_option("--out", cli.out, "Output path (stdout when omitted)");
  app.add_option("--format", cli.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--gas", cli.spec.gas, "Export the untruncated gas profile");
  app.add_option("--phase", cli.phase_out, "profile: also write the (tau, v1, v2) trajectory");
  app.add_option("--eig-out", cli.eig_out, "stability: write the eigenfunction CSV");
  app.add_option("--tol-rho", cli.tol_rho, "critical: relative bracket width");
  app.add_option("--suite", cli.suites, "verify: checks to run (comma separated, default all)");

  auto* profile = app.add_subcommand("profile", "Integrate one profile and report diagnostics");
  auto* scan = app.add_subcommand("scan", "Mass-radius-stability sweep over central densities");
  auto* stability = app.add_subcommand("stability", "Smallest eigenvalue of one liquid star");
  auto* critical = app.add_subcommand("critical", "Bisect for the stability transition density");
  auto* verify = app.add_subcommand("verify", "Run the analytic identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!cli.config.empty()) apply_config(app, cli.config);
    if (rho0->count() > 0) cli.spec.rho0 = cli.rho0;
    if (rho_min->count() > 0) cli.spec.rho0_min = cli.rho0_min;
    if (rho_max->count() > 0) cli.spec.rho0_max = cli.rho0_max;
    cli.spec.format = cli.format == "json" ? OutputFormat::Json : OutputFormat::Csv;

    if (profile->parsed()) return cmd_profile(cli);
    if (scan->parsed()) return cmd_scan(cli);
    if (stability->parsed()) return cmd_stability(cli);
    if (critical->parsed()) return cmd_critical(cli);
    if (verify->parsed()) return cmd_verify(cli);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
