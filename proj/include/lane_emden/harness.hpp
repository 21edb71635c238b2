#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lane_emden/profile.hpp"
#include "lane_emden/spectral.hpp"
#include "lane_emden/steady_state.hpp"

namespace lane_emden {

enum class OutputFormat { Csv, Json };

struct RunSpec {
  int d = 3;
  double gamma = 1.2;
  std::optional<double> rho0;
  std::optional<double> rho0_min;
  std::optional<double> rho0_max;
  int points = 0;
  bool log_spacing = true;
  int mesh_size = kDefaultMeshSize;
  double tol = kDefaultTol;
  double tol_eig = kDefaultTolEig;
  double r_max = 100.0;
  bool gas = false;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Csv;
};

/// The rho0 values of a range spec, strictly increasing.
std::vector<double> density_grid(const RunSpec& spec);

struct ProfileDiagnostics {
  double max_decay_slack;  ///< max (rho - bound)/bound over r > 0; <= 0 when the bound holds
  double max_pohozaev;     ///< max |normalized Pohozaev residual|
  std::optional<double> liquid_radius;
  std::optional<double> gas_radius;
  double total_mass;
};

struct ProfileRun {
  Profile profile;
  ProfileDiagnostics diagnostics;
};

ProfileDiagnostics diagnose(const Profile& profile);

/// Liquid profile for rho0 > 1, or a gas profile to r_max with spec.gas.
/// Writes the export to spec.out when set.
ProfileRun run_profile(const RunSpec& spec);

nlohmann::json to_json(const ProfileDiagnostics& diagnostics);

enum class RowStatus { Stable, Unstable, Marginal, Error };
const char* to_string(RowStatus status);

struct SweepRow {
  double rho0;
  double radius;
  double total_mass;
  double mu_star;
  RowStatus verdict;
  std::string error;  ///< set when verdict is Error
};

/// One independent liquid profile + eigensolve per grid point. A failing row
/// is reported with verdict Error and the sweep continues.
std::vector<SweepRow> run_sweep(const RunSpec& spec);

/// Header `rho0,R,M,mu_star,verdict`.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CriticalOptions {
  int mesh_size = kDefaultMeshSize;
  double tol = kDefaultTol;
  double tol_eig = kDefaultTolEig;
  int scan_points = 16;  ///< log-spaced pre-scan used to detect repeated sign changes
};

struct CriticalDensity {
  double rho0_crit;       ///< geometric midpoint of the final bracket
  double lower;           ///< stable end
  double upper;           ///< unstable end
  std::vector<double> log_widths;  ///< ln(upper/lower) after each bisection step
};

/// Bisection in ln rho0 on the sign of mu*, to relative bracket width tol_rho.
CriticalDensity critical_density(int d, double gamma, double rho_lo, double rho_hi, double tol_rho,
                                 const CriticalOptions& options = {});

struct CheckResult {
  std::string name;
  bool passed;
  double value;
  double threshold;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// decay, pohozaev, buchdahl, explicit, singular, fixed-point, tail,
/// radius-limit, q-symmetry, strong-form.
const std::vector<std::string>& verify_suite_names();

/// Runs the named checks (all when empty). Unknown names throw.
VerifyReport verify_suite(const std::vector<std::string>& selection = {});

}  // namespace lane_emden
