#include "srs/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "srs/cli/run_config.hpp"
#include "srs/errors.hpp"

namespace srs::cli {

using nlohmann::json;
using nlohmann::ordered_json;

json state_to_json(const MediumState& state) {
  json list = json::array();
  for (const auto& e : state.entries()) {
    list.push_back({{"mask", e.mask},
                    {"re", e.amplitude.real()},
                    {"im", e.amplitude.imag()}});
  }
  return list;
}

MediumState state_from_json(int atoms, const json& doc) {
  if (!doc.is_array()) {
    throw UsageError("state file must hold a JSON list of {mask, re, im}");
  }
  std::vector<MediumState::Entry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("mask") ||
        !item["mask"].is_number_unsigned()) {
      throw UsageError("state entry needs a nonnegative integer \"mask\"");
    }
    const double re = item.value("re", 0.0);
    const double im = item.value("im", 0.0);
    entries.push_back({item["mask"].get<Mask>(), {re, im}});
  }
  try {
    auto state = MediumState::from_entries(atoms, std::move(entries), 0.0);
    if (state.empty()) throw UsageError("state file describes the zero vector");
    return state;
  } catch (const UsageError&) {
    throw;
  } catch (const srs::Error& e) {
    throw UsageError(fmt::format("state file: {}", e.what()));
  }
}

MediumState read_state_file(int atoms, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError(fmt::format("cannot open state file {}", path.string()));
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("state file {}: {}", path.string(), e.what()));
  }
  return state_from_json(atoms, doc);
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw srs::Error(fmt::format("cannot write {}", path.string()));
  }
  out << text;
  if (!out) throw srs::Error(fmt::format("write to {} failed", path.string()));
}

std::string photon_csv(const std::vector<PhotonRecord>& records,
                       const ordered_json& params_echo) {
  std::string csv = fmt::format("# {}\n# {}\n", kVersion, params_echo.dump());
  csv += "n,P_elastic,P_stokes,stderr,mean_excitation,sector_entropy\n";
  for (std::size_t n = 0; n < records.size(); ++n) {
    const auto& r = records[n];
    csv += fmt::format("{},{},{},{},{},{}\n", n + 1, format_real(r.p_elastic),
                       format_real(r.p_stokes()),
                       std::isnan(r.std_error) ? "" : format_real(r.std_error),
                       format_real(r.mean_excitation),
                       format_real(r.sector_entropy));
  }
  return csv;
}

ordered_json pulse_to_json(const PulseMetrics& m) {
  ordered_json j;
  j["peak_index"] = m.peak_index + 1;
  j["peak_value"] = m.peak_value;
  j["final_value"] = m.final_value;
  j["unimodal"] = m.unimodal;
  j["is_pulse"] = m.is_pulse;
  j["truncated"] = m.truncated;
  return j;
}

ordered_json fit_to_json(const ScalingFit& fit) {
  ordered_json j;
  j["log_x"] = fit.abscissae;
  j["log_y"] = fit.ordinates;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["max_residual"] = fit.max_residual;
  j["excluded"] = fit.excluded;
  return j;
}

std::string line_plot_svg(const std::vector<double>& values,
                          const std::string& title,
                          const std::string& y_label) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double y_max = 0.0;
  for (double v : values) y_max = std::max(y_max, v);
  if (y_max <= 0.0) y_max = 1.0;
  const std::size_t n = values.size();

  std::string points;
  for (std::size_t i = 0; i < n; ++i) {
    const double x =
        kLeft + (n > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0);
    const double y = kTop + plot_h * (1.0 - values[i] / y_max);
    points += fmt::format("{:.2f},{:.2f} ", x, y);
  }

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
      "text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, title);
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"black\"/>\n",
      kLeft, kTop, kTop + plot_h, kLeft + plot_w);
  svg += fmt::format(
      "<text x=\"{0}\" y=\"{1}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"end\">{2:.3g}</text>\n"
      "<text x=\"{0}\" y=\"{3}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"end\">0</text>\n",
      kLeft - 6, kTop + 4, y_max, kTop + plot_h + 4);
  svg += fmt::format(
      "<text x=\"{0}\" y=\"{1}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">photon index n (1..{2})</text>\n"
      "<text x=\"16\" y=\"{3}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 16 {3})\">{4}</text>\n",
      kLeft + plot_w / 2, kHeight - 14, n, kTop + plot_h / 2, y_label);
  svg += fmt::format(
      "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
      "points=\"{}\"/>\n</svg>\n",
      points);
  return svg;
}

}  // namespace srs::cli
