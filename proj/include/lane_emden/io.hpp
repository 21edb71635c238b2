#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lane_emden/phase_portrait.hpp"
#include "lane_emden/profile.hpp"
#include "lane_emden/spectral.hpp"

namespace lane_emden {

/// Locale-independent "%.17g".
std::string format_number(double value);

/// `# d=..,gamma=..,rho0=..,R=..,M=..` followed by `r,rho,enthalpy,mass`.
void write_profile_csv(std::ostream& os, const Profile& profile);
void write_phase_csv(std::ostream& os, const std::vector<PhaseState>& states);
void write_eigenfunction_csv(std::ostream& os, const SpectralResult& result);

nlohmann::json to_json(const FixedPointReport& report);
/// Keys mu_star, lambda (null when stable), verdict, marginal, mesh_size,
/// robin_defect.
nlohmann::json to_json(const SpectralResult& result, double robin_defect);

const char* to_string(Verdict verdict);

/// Writes `content` to `path`, throwing IoError on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace lane_emden
