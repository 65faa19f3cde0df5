#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "srs/cli/run_config.hpp"
#include "srs/evolution.hpp"

namespace srs::cli {

/// The configured starting state, normalized.
MediumState resolve_initial(const RunConfig& config);

/// Everything `evolve` writes, computed without touching the filesystem.
struct EvolveOutput {
  std::vector<PhotonRecord> records;
  std::vector<double> final_profile;
  nlohmann::ordered_json summary;
  std::string csv;
  std::optional<std::string> svg;
};
EvolveOutput run_evolve(const RunConfig& config);

/// One row of a verification table.
struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  std::string tolerance;
  std::string reference;
  bool passed = false;
};

/// Suites: first-photon, second-photon, decay, cooperative, sf-limit,
/// modes, pulse, all. Unknown names raise UsageError.
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const RunConfig& config);
std::vector<std::string> suite_names();

struct ScanOutput {
  std::string csv;
  std::optional<nlohmann::ordered_json> fit;
  bool degenerate = false;
};
/// `scan` is "name=v1,v2,..." with name in {m, j, photons}.
ScanOutput run_scan(const RunConfig& config);

/// Subcommands. Return the process exit status; files go to `--out`.
int cmd_evolve(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_scan(const RunConfig& config, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& out);

}  // namespace srs::cli
