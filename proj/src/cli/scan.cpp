#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "srs/cli/commands.hpp"
#include "srs/cli/io.hpp"
#include "srs/errors.hpp"
#include "srs/observables.hpp"

namespace srs::cli {

using nlohmann::ordered_json;

namespace {

struct ScanRequest {
  std::string name;
  std::vector<std::string> values;
};

ScanRequest parse_scan(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw UsageError(
        fmt::format("scan \"{}\" must look like name=v1,v2,...", text));
  }
  ScanRequest request{text.substr(0, eq), {}};
  if (request.name != "m" && request.name != "j" && request.name != "photons") {
    throw UsageError(fmt::format(
        "cannot scan \"{}\" (expected m, j or photons)", request.name));
  }
  std::stringstream rest(text.substr(eq + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (!item.empty()) request.values.push_back(item);
  }
  if (request.values.empty()) throw UsageError("scan list is empty");
  return request;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("\"{}\" is not a number", s));
  }
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) throw UsageError(fmt::format("\"{}\" is not an integer", s));
  return static_cast<int>(v);
}

std::string header(const RunConfig& config, const std::string& columns) {
  return fmt::format("# {}\n# {}\n{}\n", kVersion, echo(config).dump(), columns);
}

ScanOutput scan_cooperative(const RunConfig& config, const ScanRequest& request) {
  if (request.name != "m") throw UsageError("fit=cooperative scans m");
  std::vector<int> ms;
  for (const auto& v : request.values) ms.push_back(to_int(v));
  ScanOutput out;
  out.csv = header(config, "m,j,P_stokes_1,P_stokes_2,difference,prefactor");
  std::vector<double> xs, ys;
  ordered_json prefactors = ordered_json::array();
  for (int m : ms) {
    const auto pt = cooperative_point(m, config.coupling);
    const double x = m * config.coupling * config.coupling;
    const double pl1 = 1.0 - pt.p_stokes_1;
    // Coefficient of (M J^2)^2 P_L(1) in the difference.
    const double prefactor = x > 0.0 ? pt.difference() / (x * x * pl1) : 0.0;
    out.csv += fmt::format("{},{},{},{},{},{}\n", m, format_real(config.coupling),
                           format_real(pt.p_stokes_1), format_real(pt.p_stokes_2),
                           format_real(pt.difference()), format_real(prefactor));
    xs.push_back(m);
    ys.push_back(pt.difference());
    prefactors.push_back(prefactor);
  }
  try {
    auto fit = fit_to_json(fit_loglog(xs, ys));
    fit["fit"] = "cooperative";
    fit["expected_slope"] = 2.0;
    fit["prefactors"] = prefactors;
    out.fit = fit;
  } catch (const UndefinedError& e) {
    out.degenerate = true;
    out.fit = ordered_json{{"fit", "cooperative"}, {"error", e.what()}};
  }
  return out;
}

ScanOutput scan_sf_limit(const RunConfig& config, const ScanRequest& request) {
  if (request.name != "j") throw UsageError("fit=sf-limit scans j");
  std::vector<double> js;
  for (const auto& v : request.values) js.push_back(to_double(v));
  const double gamma = config.gamma.value_or(1.0);
  ScanOutput out;
  out.csv = header(config, "j,n_photons,amplitude,sf_value,difference");
  try {
    const auto study = sf_limit_study(gamma, config.time, js);
    const double sf = std::exp(-0.5 * gamma * config.time);
    for (const auto& p : study.points) {
      out.csv += fmt::format("{},{},{},{},{}\n", format_real(p.j),
                             format_real(p.n_photons), format_real(p.amplitude),
                             format_real(sf), format_real(p.difference));
    }
    auto fit = fit_to_json(study.fit);
    fit["fit"] = "sf-limit";
    fit["expected_slope"] = 2.0;
    fit["gamma"] = gamma;
    fit["time"] = config.time;
    out.fit = fit;
  } catch (const UndefinedError& e) {
    out.degenerate = true;
    out.fit = ordered_json{{"fit", "sf-limit"}, {"error", e.what()}};
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return out;
}

ScanOutput scan_expansion(const RunConfig& config, const ScanRequest& request) {
  if (request.name != "j" && request.name != "m") {
    throw UsageError("fit=expansion scans j or m");
  }
  ScanOutput out;
  out.csv = header(config, "m,j,x,ratio,expansion,residual");
  std::vector<double> xs, ys;
  for (const auto& v : request.values) {
    const int m = request.name == "m" ? to_int(v) : config.atoms;
    const double j = request.name == "j" ? to_double(v) : config.coupling;
    ModelParams params;
    try {
      params = ModelParams::create(m, j);
    } catch (const srs::Error& e) {
      throw UsageError(e.what());
    }
    const auto r = oracle_ratio(params);
    const double x = m * j * j;
    out.csv += fmt::format("{},{},{},{},{},{}\n", m, format_real(j), format_real(x),
                           format_real(r.ratio), format_real(r.expansion),
                           format_real(r.residual));
    xs.push_back(x);
    ys.push_back(r.residual);
  }
  try {
    auto fit = fit_to_json(fit_loglog(xs, ys));
    fit["fit"] = "expansion";
    fit["expected_slope"] = 4.0;
    out.fit = fit;
  } catch (const UndefinedError& e) {
    out.degenerate = true;
    out.fit = ordered_json{{"fit", "expansion"}, {"error", e.what()}};
  }
  return out;
}

ScanOutput scan_plain(const RunConfig& config, const ScanRequest& request) {
  ScanOutput out;
  out.csv = header(config, fmt::format("{},photons,expected_stokes_photons,peak_index,"
                                       "peak_value,final_p_stokes,final_mean_excitation",
                                       request.name));
  for (const auto& v : request.values) {
    RunConfig point = config;
    if (request.name == "m") point.atoms = to_int(v);
    if (request.name == "j") point.coupling = to_double(v);
    if (request.name == "photons") point.photons = std::to_string(to_int(v));
    const auto result = run_evolve(point);
    const auto& totals = result.summary["totals"];
    const auto& pulse = result.summary["pulse"];
    const auto& last = result.records.back();
    out.csv += fmt::format(
        "{},{},{},{},{},{},{}\n", v, result.records.size(),
        format_real(totals["expected_stokes_photons"].get<double>()),
        pulse.is_null() ? std::string() : std::to_string(pulse["peak_index"].get<std::size_t>()),
        pulse.is_null() ? std::string() : format_real(pulse["peak_value"].get<double>()),
        format_real(last.p_stokes()), format_real(last.mean_excitation));
  }
  return out;
}

}  // namespace

ScanOutput run_scan(const RunConfig& config) {
  if (!config.scan) throw UsageError("scan needs --scan name=v1,v2,...");
  const auto request = parse_scan(*config.scan);
  if (config.fit == "cooperative") return scan_cooperative(config, request);
  if (config.fit == "sf-limit") return scan_sf_limit(config, request);
  if (config.fit == "expansion") return scan_expansion(config, request);
  if (config.fit == "none") return scan_plain(config, request);
  throw UsageError(fmt::format(
      "unknown fit \"{}\" (expected none, cooperative, sf-limit or expansion)",
      config.fit));
}

int cmd_scan(const RunConfig& config, std::ostream& log) {
  const auto result = run_scan(config);
  const std::string prefix = config.out.value_or("srs_scan");
  write_text(prefix + ".csv", result.csv);
  log << "wrote " << prefix << ".csv";
  if (result.fit) {
    write_text(prefix + ".fit.json", result.fit->dump(2) + "\n");
    log << " and " << prefix << ".fit.json";
    if (result.fit->contains("slope")) {
      log << fmt::format(" (slope {:.6f})", (*result.fit)["slope"].get<double>());
    }
  }
  log << '\n';
  if (result.degenerate) {
    log << "fit is degenerate: " << (*result.fit)["error"].get<std::string>() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace srs::cli
