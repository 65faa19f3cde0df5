#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srs/model_params.hpp"
#include "srs/vertex_sweep.hpp"

namespace srs::cli {

inline constexpr const char* kVersion = "srs-sim 0.1.0";

/// Invalid command line or configuration; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Tree, Kraus, Mc };

/// Every knob of a run. Field names mirror the long flag names; a JSON
/// config file uses the same keys.
struct RunConfig {
  Mode mode = Mode::Kraus;
  int atoms = 4;
  double coupling = 0.1;
  /// Photon count ("12") or an explicit spin string ("LLSLS").
  std::optional<std::string> photons;
  /// "L*", "S*", or a spin string repeated cyclically to the photon count.
  std::string pattern = "L*";
  /// "ground", "excited", or a path to a JSON state file.
  std::string initial = "ground";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  double prune_eps = 0.0;
  unsigned threads = 1;
  std::optional<std::string> out;
  bool plot = false;
  std::string suite = "all";
  std::optional<std::string> scan;
  std::string fit = "none";
  std::optional<double> gamma;
  std::optional<double> flux;
  double time = 2.0;
  std::optional<double> tol;
  bool allow_large = false;
};

Mode parse_mode(const std::string& text);
std::string to_string(Mode mode);

/// Overlays the keys of a JSON object onto `config`. Unknown keys and
/// wrongly typed values raise UsageError.
void apply_json(RunConfig& config, const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

/// The incident photon stream described by `photons` and `pattern`.
std::vector<PhotonSpin> resolve_spins(const RunConfig& config);

/// Model parameters, including optional gamma/flux.
ModelParams resolve_params(const RunConfig& config);

/// Checks the configuration against mode caps before any computation.
void validate(const RunConfig& config);

/// Parameter echo for output headers (excludes the thread count, which
/// never changes results).
nlohmann::ordered_json echo(const RunConfig& config);

}  // namespace srs::cli
