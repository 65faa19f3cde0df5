#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "srs/cli/commands.hpp"
#include "srs/cli/io.hpp"
#include "srs/errors.hpp"
#include "srs/observables.hpp"

namespace srs::cli {

using nlohmann::json;
using nlohmann::ordered_json;

MediumState resolve_initial(const RunConfig& config) {
  check_atom_count(config.atoms);
  if (config.initial == "ground") return MediumState::all_ground(config.atoms);
  if (config.initial == "excited") return MediumState::all_excited(config.atoms);
  return read_state_file(config.atoms, config.initial).normalized();
}

namespace {

std::string output_prefix(const RunConfig& config, const char* fallback) {
  return config.out.value_or(fallback);
}

}  // namespace

EvolveOutput run_evolve(const RunConfig& config) {
  validate(config);
  const auto params = resolve_params(config);
  const auto spins = resolve_spins(config);
  const auto initial = resolve_initial(config);

  EvolveOutput out;
  double final_trace = 1.0;
  switch (config.mode) {
    case Mode::Tree: {
      TreeOptions opts;
      opts.prune_eps = config.prune_eps;
      const auto leaves = run_exact_tree(params, initial, spins, opts);
      out.records = tree_records(leaves, spins, initial.sector());
      out.final_profile.assign(static_cast<std::size_t>(params.m), 0.0);
      final_trace = 0.0;
      for (const auto& leaf : leaves) {
        final_trace += leaf.probability;
        const auto profile = excitation_profile(leaf.state);
        for (std::size_t a = 0; a < profile.size(); ++a) {
          out.final_profile[a] += leaf.probability * profile[a];
        }
      }
      for (auto& v : out.final_profile) v /= final_trace;
      break;
    }
    case Mode::Kraus: {
      KrausOptions opts;
      opts.allow_large = config.allow_large;
      const auto result = run_kraus(params, initial, spins, opts);
      out.records = result.photons;
      out.final_profile = result.final_state.excitation_profile();
      final_trace = result.final_state.trace();
      break;
    }
    case Mode::Mc: {
      McOptions opts;
      opts.trials = config.trials;
      opts.seed = config.seed;
      opts.threads = config.threads;
      const auto stats = run_mc(params, initial, spins, opts);
      out.records = stats.records();
      out.final_profile = stats.final_profile_mean();
      break;
    }
  }

  const ordered_json params_echo = echo(config);
  out.csv = photon_csv(out.records, params_echo);

  std::vector<double> stokes;
  std::vector<double> band;
  double expected_stokes = 0.0;
  for (const auto& r : out.records) {
    stokes.push_back(r.p_stokes());
    band.push_back(config.mode == Mode::Mc ? 2.0 * r.std_error : 1e-10);
    expected_stokes += r.p_stokes();
  }

  ordered_json summary;
  summary["version"] = kVersion;
  summary["params"] = params_echo;
  summary["spins"] = to_string(spins);
  summary["photon_count"] = spins.size();
  ordered_json totals;
  totals["expected_stokes_photons"] = expected_stokes;
  totals["final_trace"] = final_trace;
  totals["final_mean_excitation"] =
      out.records.empty() ? initial.sector() : out.records.back().mean_excitation;
  totals["final_sector_entropy"] =
      out.records.empty() ? 0.0 : out.records.back().sector_entropy;
  summary["totals"] = totals;
  summary["pulse"] = stokes.size() >= 3
                         ? pulse_to_json(pulse_metrics(stokes, band))
                         : ordered_json(nullptr);
  summary["final_profile"] = out.final_profile;
  out.summary = summary;

  if (config.plot) {
    out.svg = line_plot_svg(
        stokes,
        fmt::format("Stokes probability per photon (M = {}, J = {})",
                    config.atoms, config.coupling),
        "P_stokes");
  }
  return out;
}

int cmd_evolve(const RunConfig& config, std::ostream& log) {
  const auto result = run_evolve(config);
  const std::string prefix = output_prefix(config, "srs_evolve");
  write_text(prefix + ".csv", result.csv);
  write_text(prefix + ".json", result.summary.dump(2) + "\n");
  log << "wrote " << prefix << ".csv and " << prefix << ".json";
  if (result.svg) {
    write_text(prefix + ".svg", *result.svg);
    log << " and " << prefix << ".svg";
  }
  log << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  validate(config);
  const auto params = resolve_params(config);
  const auto spins = config.photons || config.pattern != "L*"
                         ? resolve_spins(config)
                         : std::vector<PhotonSpin>{PhotonSpin::L};
  const auto initial = resolve_initial(config);
  SweepOptions opts;
  opts.prune_eps = config.prune_eps;
  const auto r = sweep(initial, spins.front(), params, opts);

  ordered_json doc;
  doc["version"] = kVersion;
  doc["params"] = echo(config);
  doc["spin_in"] = std::string(1, to_char(spins.front()));
  doc["p_elastic"] = r.p_elastic;
  doc["p_inelastic"] = r.p_inelastic;
  doc["elastic_sector"] = r.elastic.sector();
  doc["inelastic_sector"] = r.inelastic.sector();
  doc["elastic"] = state_to_json(r.elastic);
  doc["inelastic"] = state_to_json(r.inelastic);
  const std::string text = doc.dump(2) + "\n";
  if (config.out) {
    write_text(*config.out + ".json", text);
  }
  out << text;
  return 0;
}

}  // namespace srs::cli
