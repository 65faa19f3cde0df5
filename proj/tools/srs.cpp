// Command-line driver: srs {evolve,verify,scan,sweep} [flags]

#include <iostream>

#include <CLI11.hpp>

#include "srs/cli/commands.hpp"
#include "srs/errors.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> mode;
  std::optional<int> atoms;
  std::optional<double> coupling;
  std::optional<std::string> photons;
  std::optional<std::string> pattern;
  std::optional<std::string> initial;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> prune_eps;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  bool plot = false;
  std::optional<std::string> suite;
  std::optional<std::string> scan;
  std::optional<std::string> fit;
  std::optional<double> gamma;
  std::optional<double> flux;
  std::optional<double> time;
  std::optional<double> tol;
  bool allow_large = false;
};

template <typename T, typename U>
void overlay(T& target, const std::optional<U>& value) {
  if (value) target = *value;
}

srs::cli::RunConfig build_config(const Flags& f) {
  using srs::cli::RunConfig;
  RunConfig c = f.config ? srs::cli::load_config_file(*f.config) : RunConfig{};
  if (f.mode) c.mode = srs::cli::parse_mode(*f.mode);
  overlay(c.atoms, f.atoms);
  overlay(c.coupling, f.coupling);
  if (f.photons) c.photons = f.photons;
  overlay(c.pattern, f.pattern);
  overlay(c.initial, f.initial);
  overlay(c.trials, f.trials);
  overlay(c.seed, f.seed);
  overlay(c.prune_eps, f.prune_eps);
  overlay(c.threads, f.threads);
  if (f.out) c.out = f.out;
  c.plot = c.plot || f.plot;
  overlay(c.suite, f.suite);
  if (f.scan) c.scan = f.scan;
  overlay(c.fit, f.fit);
  if (f.gamma) c.gamma = f.gamma;
  if (f.flux) c.flux = f.flux;
  overlay(c.time, f.time);
  if (f.tol) c.tol = f.tol;
  c.allow_large = c.allow_large || f.allow_large;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-photon stimulated Raman scattering on a chain of two-level atoms"};
  app.set_version_flag("--version", srs::cli::kVersion);
  app.require_subcommand(1);
  Flags f;

  app.add_option("--config", f.config, "JSON file with default values for any flag");
  app.add_option("--mode", f.mode, "evolution mode: tree, kraus or mc");
  app.add_option("--atoms", f.atoms, "number of atoms M");
  app.add_option("--coupling", f.coupling, "coupling J in [0, pi/2]");
  app.add_option("--photons", f.photons, "photon count, or an explicit spin string like LLSLS");
  app.add_option("--pattern", f.pattern, "L*, S*, or a spin string repeated to the photon count");
  app.add_option("--initial", f.initial, "ground, excited, or a JSON state file");
  app.add_option("--trials", f.trials, "Monte Carlo trajectories");
  app.add_option("--seed", f.seed, "master seed for Monte Carlo streams");
  app.add_option("--prune-eps", f.prune_eps, "drop tree branches / amplitudes below this");
  app.add_option("--threads", f.threads, "worker threads for Monte Carlo");
  app.add_option("--out", f.out, "output path prefix");
  app.add_flag("--plot", f.plot, "also write an SVG plot");
  app.add_option("--suite", f.suite, "verify suite (or all)");
  app.add_option("--scan", f.scan, "scan specification name=v1,v2,... (m, j, photons)");
  app.add_option("--fit", f.fit, "none, cooperative, sf-limit or expansion");
  app.add_option("--gamma", f.gamma, "decay constant gamma = J^2 rho");
  app.add_option("--flux", f.flux, "incident photon flux rho");
  app.add_option("--time", f.time, "elapsed time t for superfluorescence-limit scans");
  app.add_option("--tol", f.tol, "override tolerance of exact verify checks");
  app.add_flag("--allow-large", f.allow_large, "lift the Kraus-mode atom cap");

  auto* evolve = app.add_subcommand("evolve", "evolve the medium through a photon stream");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  auto* scan = app.add_subcommand("scan", "scan a parameter and optionally fit a scaling law");
  auto* sweep = app.add_subcommand("sweep", "dump the branches of a single photon");
  for (auto* sub : {evolve, verify, scan, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = build_config(f);
    if (evolve->parsed()) return srs::cli::cmd_evolve(config, std::cout);
    if (verify->parsed()) return srs::cli::cmd_verify(config, std::cout);
    if (scan->parsed()) return srs::cli::cmd_scan(config, std::cout);
    if (sweep->parsed()) return srs::cli::cmd_sweep(config, std::cout);
  } catch (const srs::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const srs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
