#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "srs/cli/commands.hpp"
#include "srs/errors.hpp"
#include "srs/observables.hpp"

namespace srs::cli {

namespace {

using Checks = std::vector<CheckResult>;

CheckResult at_most(std::string suite, std::string name, double measured,
                    double tol, std::string reference) {
  return {std::move(suite), std::move(name), measured,
          fmt::format("<= {:.1e}", tol), std::move(reference),
          measured <= tol};
}

CheckResult within(std::string suite, std::string name, double measured,
                   double lo, double hi, std::string reference) {
  return {std::move(suite), std::move(name), measured,
          fmt::format("in [{}, {}]", lo, hi), std::move(reference),
          measured >= lo && measured <= hi};
}

Checks first_photon(const RunConfig& config) {
  const double tol = config.tol.value_or(1e-13);
  double worst_elastic = 0.0, worst_phi = 0.0;
  for (int m = 1; m <= 20; ++m) {
    for (double j : {0.05, 0.1, 0.3, 0.6}) {
      const auto params = ModelParams::create(m, j);
      const auto r = sweep(MediumState::all_ground(m), PhotonSpin::L, params,
                           SweepOptions{0.0, -1});
      worst_elastic = std::max(
          worst_elastic,
          std::abs(r.elastic.amplitude(BasisConfig{0}) - std::pow(params.b, m)));
      const auto phi = first_photon_wavefunction(params);
      for (int a = 1; a <= m; ++a) {
        worst_phi = std::max(
            worst_phi, std::abs(phi[static_cast<std::size_t>(a - 1)] -
                                params.c * std::pow(params.b, a - 1)));
      }
    }
  }
  const auto params = ModelParams::create(20, 0.1);
  const auto phi = first_photon_wavefunction(params);
  double worst_slope = 0.0;
  for (std::size_t a = 1; a < phi.size(); ++a) {
    const double slope = std::log(std::abs(phi[a])) - std::log(std::abs(phi[a - 1]));
    worst_slope = std::max(worst_slope, std::abs(slope - std::log(std::cos(0.1))));
  }
  return {
      at_most("first-photon", "elastic amplitude, M 1..20", worst_elastic, tol,
              "A_L(1) = b^M"),
      at_most("first-photon", "excitation wavefunction, M 1..20", worst_phi, tol,
              "phi_a = c b^(a-1)"),
      at_most("first-photon", "log-linear profile slope, M=20 J=0.1",
              worst_slope, config.tol.value_or(1e-12),
              "d ln|phi_a| / da = ln cos J"),
  };
}

Checks second_photon(const RunConfig& config) {
  const double tol = config.tol.value_or(1e-10);
  const std::vector<PhotonSpin> two{PhotonSpin::L, PhotonSpin::L};
  double worst = 0.0;
  bool interference = true, truncated_reverses = true;
  for (int m = 1; m <= 10; ++m) {
    for (double j : {0.1, 0.2, 0.3}) {
      const auto params = ModelParams::create(m, j);
      const auto rec = tree_records(
          run_exact_tree(params, MediumState::all_ground(m), two), two, 0);
      worst = std::max(worst, std::abs(rec[1].p_elastic - oracle_pl2(params)));
      if (m >= 3 && rec[1].p_inelastic <= rec[0].p_inelastic) {
        interference = false;
      }
      TreeOptions capped;
      capped.sweep.max_conversions = 1;
      const auto trunc = tree_records(
          run_exact_tree(params, MediumState::all_ground(m), two, capped), two,
          0);
      if (trunc[1].p_inelastic >= trunc[0].p_inelastic) {
        truncated_reverses = false;
      }
    }
  }
  double worst_m1 = 0.0;
  for (double j : {0.1, 0.2, 0.3}) {
    const auto params = ModelParams::create(1, j);
    worst_m1 = std::max(worst_m1, std::abs(oracle_pl2(params) -
                                           (params.p * params.p + 1 - params.p)));
  }
  std::vector<double> xs, residuals;
  for (double x : {0.1, 0.05, 0.025}) {
    const auto params = ModelParams::create(10, std::sqrt(x / 10.0));
    xs.push_back(x);
    residuals.push_back(oracle_ratio(params).residual);
  }
  const auto fit = fit_loglog(xs, residuals);
  return {
      at_most("second-photon", "tree vs closed form, M 1..10, J 0.1..0.3", worst,
              tol, "P_L(2) closed form"),
      at_most("second-photon", "one-atom collapse p^2 + 1 - p", worst_m1,
              config.tol.value_or(1e-14), "P_L(2) at M = 1"),
      within("second-photon", "expansion residual slope, M=10", fit.slope, 3.8,
             4.2, "P_L(2)/P_L(1) = 1 - 2(MJ^2)^2 + O((MJ^2)^4)"),
      {"second-photon", "P_S(2) > P_S(1) for M 3..10", interference ? 1.0 : 0.0,
       "== 1", "interference of two sub-channels", interference},
      {"second-photon", "dropping double conversion reverses it",
       truncated_reverses ? 1.0 : 0.0, "== 1", "single sub-channel only",
       truncated_reverses},
  };
}

Checks decay(const RunConfig& config) {
  const double tol = config.tol.value_or(1e-12);
  double worst = 0.0;
  for (double j : {0.01, 0.1, 0.3}) {
    const auto params = ModelParams::create(1, j);
    MediumState state = MediumState::all_excited(1);
    for (int n = 1; n <= 10000; ++n) {
      auto r = sweep(state, PhotonSpin::S, params, SweepOptions{0.0, -1});
      state = std::move(r.elastic);
      if (n % 100 == 0 || n < 100) {
        const Amplitude got = state.amplitude(BasisConfig{1});
        worst = std::max(worst, std::abs(got - std::pow(std::cos(j), n)));
      }
    }
  }
  const auto params = ModelParams::create(1, 0.2);
  const std::vector<PhotonSpin> stream(200, PhotonSpin::S);
  const auto kraus = run_kraus(params, MediumState::all_excited(1), stream);
  double worst_prob = 0.0;
  for (std::size_t n = 0; n < stream.size(); ++n) {
    worst_prob = std::max(
        worst_prob, std::abs(kraus.photons[n].mean_excitation -
                             std::pow(std::cos(0.2), 2.0 * static_cast<double>(n + 1))));
  }
  return {
      at_most("decay", "survival amplitude, N <= 10^4", worst, tol,
              "A_ex(N) = (cos J)^N"),
      at_most("decay", "survival probability (Kraus), N <= 200", worst_prob, tol,
              "|A_ex(N)|^2 = (cos J)^2N"),
  };
}

Checks cooperative(const RunConfig&) {
  const std::vector<int> ms{8, 16, 32, 64};
  const auto scan = cooperative_slope(ms, 0.02);
  return {within("cooperative", "slope of log(P_S2 - P_S1) vs log M, J=0.02",
                 scan.fit.slope, 1.9, 2.1, "dI_S/dt(0) grows as M^2")};
}

Checks sf_limit(const RunConfig& config) {
  const std::vector<double> js{0.1, 0.05, 0.025};
  const auto study = sf_limit_study(config.gamma.value_or(1.0), config.time, js);
  return {within("sf-limit", "convergence order in J (gamma t fixed)",
                 study.fit.slope, 1.8, 2.2,
                 "(cos J)^N -> exp(-gamma t / 2), J^2 rho = gamma")};
}

Checks modes(const RunConfig& config) {
  const auto params = resolve_params(config);
  RunConfig local = config;
  if (!local.photons) local.photons = "10";
  const auto spins = resolve_spins(local);
  const auto initial = resolve_initial(config);
  const auto tree = tree_records(run_exact_tree(params, initial, spins), spins,
                                 initial.sector());
  const auto kraus = run_kraus(params, initial, spins);
  McOptions opts;
  opts.trials = config.trials;
  opts.seed = config.seed;
  opts.threads = config.threads;
  const auto mc = run_mc(params, initial, spins, opts);
  const auto freq = mc.inelastic_frequencies();
  const auto se = mc.standard_errors();
  double worst = 0.0;
  std::size_t agree = 0;
  for (std::size_t n = 0; n < spins.size(); ++n) {
    worst = std::max(worst, std::abs(tree[n].p_inelastic - kraus.photons[n].p_inelastic));
    const double diff = std::abs(freq[n] - kraus.photons[n].p_inelastic);
    if (diff <= 3.0 * se[n] || (se[n] == 0.0 && diff <= 1e-12)) ++agree;
  }
  const double fraction = static_cast<double>(agree) / static_cast<double>(spins.size());
  return {
      at_most("modes", fmt::format("tree vs kraus marginals, M={} N={}", params.m,
                                   spins.size()),
              worst, config.tol.value_or(1e-10), "same channel, two algorithms"),
      {"modes", fmt::format("mc within 3 sigma of kraus ({} trials)", config.trials),
       fraction, ">= 0.97", "statistical unraveling", fraction >= 0.97},
  };
}

Checks pulse(const RunConfig&) {
  const auto params = ModelParams::create(10, 0.3);
  const std::vector<PhotonSpin> stream(300, PhotonSpin::L);
  const auto result = run_kraus(params, MediumState::all_ground(10), stream);
  std::vector<double> series;
  for (const auto& r : result.photons) series.push_back(r.p_stokes());
  const auto m = pulse_metrics(series);
  const bool interior = m.peak_index > 0 && m.peak_index + 1 < series.size();
  return {
      {"pulse", "interior peak index (M=10, J=0.3, N=300)",
       static_cast<double>(m.peak_index + 1), "in (1, 300)", "Stokes pulse",
       interior},
      at_most("pulse", "final / peak", m.final_value / m.peak_value, 0.1,
              "Stokes channel dies out"),
      {"pulse", "final mean excitation / M",
       result.photons.back().mean_excitation / 10.0, "> 0.9", "inverted medium",
       result.photons.back().mean_excitation > 9.0},
  };
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"first-photon", "second-photon", "decay", "cooperative",
          "sf-limit",     "modes",         "pulse"};
}

std::vector<CheckResult> run_suite(const std::string& suite,
                                   const RunConfig& config) {
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, config);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "first-photon") return first_photon(config);
  if (suite == "second-photon") return second_photon(config);
  if (suite == "decay") return decay(config);
  if (suite == "cooperative") return cooperative(config);
  if (suite == "sf-limit") return sf_limit(config);
  if (suite == "modes") return modes(config);
  if (suite == "pulse") return pulse(config);
  throw UsageError(fmt::format("unknown suite \"{}\"", suite));
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const auto known = suite_names();
  if (config.suite != "all" &&
      std::find(known.begin(), known.end(), config.suite) == known.end()) {
    throw UsageError(fmt::format("unknown suite \"{}\"", config.suite));
  }
  validate(config);
  const auto results = run_suite(config.suite, config);
  out << fmt::format("{:<14} {:<52} {:>24} {:>14}  {:<4}  {}\n", "suite", "check",
                     "measured", "tolerance", "ok", "reference");
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.passed;
    out << fmt::format("{:<14} {:<52} {:>24.17g} {:>14}  {:<4}  {}\n", r.suite,
                       r.name, r.measured, r.tolerance,
                       r.passed ? "PASS" : "FAIL", r.reference);
  }
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const auto& r) { return !r.passed; });
  out << fmt::format("{} of {} checks passed\n", results.size() - failed,
                     results.size());
  return all_pass ? 0 : 1;
}

}  // namespace srs::cli
