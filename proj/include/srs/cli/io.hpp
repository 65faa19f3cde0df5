#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "srs/evolution.hpp"
#include "srs/medium_state.hpp"
#include "srs/observables.hpp"

namespace srs::cli {

/// State files hold a JSON list of {"mask": integer, "re": real, "im": real}.
nlohmann::json state_to_json(const MediumState& state);
MediumState state_from_json(int atoms, const nlohmann::json& doc);
MediumState read_state_file(int atoms, const std::filesystem::path& path);

/// 17 significant digits: round-trips every double.
std::string format_real(double value);

/// Writes a file atomically enough for batch use; throws srs::Error with
/// the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Per-photon table: one header comment with the version, one with the
/// parameter echo, then
/// n,P_elastic,P_stokes,stderr,mean_excitation,sector_entropy.
std::string photon_csv(const std::vector<PhotonRecord>& records,
                       const nlohmann::ordered_json& params_echo);

nlohmann::ordered_json pulse_to_json(const PulseMetrics& metrics);
nlohmann::ordered_json fit_to_json(const ScalingFit& fit);

/// Self-contained SVG line plot of `values` against 1..N.
std::string line_plot_svg(const std::vector<double>& values,
                          const std::string& title,
                          const std::string& y_label);

}  // namespace srs::cli
