#include "srs/cli/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"

namespace srs::cli {

using nlohmann::json;

Mode parse_mode(const std::string& text) {
  if (text == "tree") return Mode::Tree;
  if (text == "kraus") return Mode::Kraus;
  if (text == "mc") return Mode::Mc;
  throw UsageError(
      fmt::format("unknown mode \"{}\" (expected tree, kraus or mc)", text));
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Tree:
      return "tree";
    case Mode::Kraus:
      return "kraus";
    case Mode::Mc:
      return "mc";
  }
  return "?";
}

namespace {

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw UsageError(
        fmt::format("config key \"{}\" has the wrong type ({})", key,
                    value.type_name()));
  }
}

// Photon counts may be given as a number or a string in JSON.
std::string photons_from_json(const json& value) {
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return get_as<std::string>(value, "photons");
}

}  // namespace

void apply_json(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") {
      c.mode = parse_mode(get_as<std::string>(value, key));
    } else if (key == "atoms") {
      c.atoms = get_as<int>(value, key);
    } else if (key == "coupling") {
      c.coupling = get_as<double>(value, key);
    } else if (key == "photons") {
      c.photons = photons_from_json(value);
    } else if (key == "pattern") {
      c.pattern = get_as<std::string>(value, key);
    } else if (key == "initial") {
      c.initial = get_as<std::string>(value, key);
    } else if (key == "trials") {
      c.trials = get_as<std::uint64_t>(value, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(value, key);
    } else if (key == "prune-eps") {
      c.prune_eps = get_as<double>(value, key);
    } else if (key == "threads") {
      c.threads = get_as<unsigned>(value, key);
    } else if (key == "out") {
      c.out = get_as<std::string>(value, key);
    } else if (key == "plot") {
      c.plot = get_as<bool>(value, key);
    } else if (key == "suite") {
      c.suite = get_as<std::string>(value, key);
    } else if (key == "scan") {
      c.scan = get_as<std::string>(value, key);
    } else if (key == "fit") {
      c.fit = get_as<std::string>(value, key);
    } else if (key == "gamma") {
      c.gamma = get_as<double>(value, key);
    } else if (key == "flux") {
      c.flux = get_as<double>(value, key);
    } else if (key == "time") {
      c.time = get_as<double>(value, key);
    } else if (key == "tol") {
      c.tol = get_as<double>(value, key);
    } else if (key == "allow-large") {
      c.allow_large = get_as<bool>(value, key);
    } else {
      throw UsageError(fmt::format("unknown config key \"{}\"", key));
    }
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file {}", path));
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("config file {}: {}", path, e.what()));
  }
  RunConfig config;
  apply_json(config, doc);
  return config;
}

namespace {

bool is_count(const std::string& text) {
  return !text.empty() &&
         std::all_of(text.begin(), text.end(),
                     [](unsigned char ch) { return std::isdigit(ch); });
}

std::vector<PhotonSpin> spins_of(const std::string& text) {
  try {
    return parse_spins(text);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

std::vector<PhotonSpin> resolve_spins(const RunConfig& c) {
  const bool starred = c.pattern.size() == 2 && c.pattern[1] == '*';
  const std::string base = starred ? c.pattern.substr(0, 1) : c.pattern;
  const auto unit = spins_of(base);
  if (unit.empty()) throw UsageError("photon pattern is empty");

  std::size_t count = 0;
  if (c.photons && !is_count(*c.photons)) {
    const auto explicit_spins = spins_of(*c.photons);
    if (explicit_spins.empty()) throw UsageError("photon list is empty");
    return explicit_spins;
  }
  if (c.photons) {
    count = std::stoull(*c.photons);
    if (count == 0) throw UsageError("photon count must be at least 1");
  } else if (!starred) {
    count = unit.size();
  } else {
    throw UsageError(
        fmt::format("pattern \"{}\" needs a photon count (--photons N)",
                    c.pattern));
  }
  std::vector<PhotonSpin> spins(count);
  for (std::size_t n = 0; n < count; ++n) spins[n] = unit[n % unit.size()];
  return spins;
}

ModelParams resolve_params(const RunConfig& c) {
  ModelParams params;
  try {
    params = ModelParams::create(c.atoms, c.coupling);
    if (c.gamma && c.flux) {
      params = params.with_photon_flux(*c.flux);
      if (std::abs(*params.gamma - *c.gamma) > 1e-12 * std::max(1.0, *c.gamma)) {
        throw UsageError(fmt::format(
            "--gamma {} disagrees with J^2 * flux = {}", *c.gamma, *params.gamma));
      }
    } else if (c.gamma) {
      params = params.with_decay_constant(*c.gamma);
    } else if (c.flux) {
      params = params.with_photon_flux(*c.flux);
    }
  } catch (const srs::Error& e) {
    throw UsageError(e.what());
  }
  return params;
}

void validate(const RunConfig& c) {
  resolve_params(c);
  if (c.prune_eps < 0.0) throw UsageError("--prune-eps must be nonnegative");
  if (c.mode == Mode::Mc && c.trials == 0) {
    throw UsageError("--trials must be at least 1 in mc mode");
  }
  if (c.mode == Mode::Kraus && c.atoms > KrausOptions{}.max_atoms &&
      !c.allow_large) {
    throw UsageError(fmt::format(
        "kraus mode is capped at {} atoms (requested {}); use --mode mc or "
        "pass --allow-large",
        KrausOptions{}.max_atoms, c.atoms));
  }
  if (c.threads == 0) throw UsageError("--threads must be at least 1");
  if (!(c.time > 0.0)) throw UsageError("--time must be positive");
}

nlohmann::ordered_json echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(c.mode);
  j["atoms"] = c.atoms;
  j["coupling"] = c.coupling;
  j["photons"] = c.photons ? json(*c.photons) : json(nullptr);
  j["pattern"] = c.pattern;
  j["initial"] = c.initial;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["prune-eps"] = c.prune_eps;
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["flux"] = c.flux ? json(*c.flux) : json(nullptr);
  return j;
}

}  // namespace srs::cli
