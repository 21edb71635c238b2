#include "lane_emden/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"

namespace lane_emden {

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

void write_profile_csv(std::ostream& os, const Profile& profile) {
  const StarConfig& c = profile.config();
  os << "# d=" << c.d << ",gamma=" << format_number(c.gamma)
     << ",rho0=" << format_number(c.rho_center);
  if (profile.liquid_radius()) os << ",R=" << format_number(*profile.liquid_radius());
  if (profile.gas_radius()) os << ",gas_radius=" << format_number(*profile.gas_radius());
  os << ",M=" << format_number(profile.total_mass()) << '\n';
  os << "r,rho,enthalpy,mass\n";
  const auto& col = profile.columns();
  for (std::size_t i = 0; i < profile.size(); ++i)
    os << format_number(col.radius[i]) << ',' << format_number(col.rho[i]) << ','
       << format_number(col.enthalpy[i]) << ',' << format_number(col.mass[i]) << '\n';
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseState>& states) {
  os << "tau,v1,v2\n";
  for (const PhaseState& s : states)
    os << format_number(s.tau) << ',' << format_number(s.v1) << ',' << format_number(s.v2)
       << '\n';
}

void write_eigenfunction_csv(std::ostream& os, const SpectralResult& result) {
  os << "y,chi\n";
  for (std::size_t i = 0; i < result.nodes.size(); ++i)
    os << format_number(result.nodes[i]) << ',' << format_number(result.chi[i]) << '\n';
}

nlohmann::json to_json(const FixedPointReport& report) {
  return {{"v1_star", report.v1_star},
          {"v2_star", report.v2_star},
          {"lambda_re", {report.lambda_plus.real(), report.lambda_minus.real()}},
          {"lambda_im", {report.lambda_plus.imag(), report.lambda_minus.imag()}},
          {"stable", report.exponentially_stable}};
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::Unstable ? "Unstable" : "Stable";
}

nlohmann::json to_json(const SpectralResult& result, double robin_defect) {
  nlohmann::json j = {{"mu_star", result.mu_star},
                      {"lambda", nullptr},
                      {"verdict", to_string(result.verdict)},
                      {"marginal", result.marginal},
                      {"mesh_size", result.mesh_size()},
                      {"robin_defect", robin_defect}};
  if (result.lambda) j["lambda"] = *result.lambda;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << content;
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lane_emden
