// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and parameter grids are fixed here.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "srs/cli/io.hpp"
#include "srs/evolution.hpp"
#include "srs/observables.hpp"
#include "srs/vertex_sweep.hpp"
#include "support/oracles.hpp"
#include "support/random_states.hpp"

using namespace srs;

namespace {

constexpr SweepOptions kExact{0.0, -1};

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<PhotonSpin> laser(std::size_t n) { return std::vector<PhotonSpin>(n, PhotonSpin::L); }

Outcome first_photon() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int m = 1; m <= 20; ++m) {
    for (double j : {0.05, 0.1, 0.3, 0.6}) {
      const auto params = ModelParams::create(m, j);
      const double b = std::cos(j);
      const Amplitude c{0.0, std::sin(j)};
      const auto r = sweep(MediumState::all_ground(m), PhotonSpin::L, params, kExact);
      worst = std::max(worst, std::abs(r.elastic.amplitude(BasisConfig{0}) - std::pow(b, m)));
      for (int a = 1; a <= m; ++a) {
        const Amplitude expected = c * std::pow(b, a - 1);
        worst = std::max(worst, std::abs(r.inelastic.amplitude(BasisConfig{atom_bit(a)}) - expected));
      }
      if (r.inelastic.size() != static_cast<std::size_t>(m)) worst = INFINITY;
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-13 && t < 1.0,
          fmt::format("max error {:.3e} (<= 1e-13), {:.3f} s (< 1 s)", worst, t)};
}

Outcome unitarity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261018);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto state = testing_support::random_state(rng, m);
    const auto params = ModelParams::create(m, std::uniform_real_distribution<double>(0.0, 1.5)(rng));
    for (auto spin : {PhotonSpin::L, PhotonSpin::S}) {
      const auto r = sweep(state, spin, params, kExact);
      worst = std::max(worst, std::abs(r.p_elastic + r.p_inelastic - 1.0));
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t < 5.0,
          fmt::format("max |p_el + p_in - 1| {:.3e} (<= 1e-12), {:.3f} s (< 5 s)", worst, t)};
}

Outcome matrix_product() {
  double worst = 0.0;
  for (int m = 1; m <= 4; ++m) {
    for (double j : {0.1, 0.5, 1.2}) {
      const auto params = ModelParams::create(m, j);
      const auto dense = oracle::dense_monodromy(m, j);
      for (Mask in = 0; in <= full_mask(m); ++in) {
        for (bool stokes_in : {false, true}) {
          const auto r = sweep(MediumState::basis(m, BasisConfig{in}),
                               stokes_in ? PhotonSpin::S : PhotonSpin::L, params, kExact);
          const auto col = static_cast<Eigen::Index>(oracle::full_index(m, stokes_in, in));
          for (Mask out = 0; out <= full_mask(m); ++out) {
            for (bool stokes_out : {false, true}) {
              const auto& branch = stokes_out == stokes_in ? r.elastic : r.inelastic;
              const Amplitude got = std::popcount(out) == branch.sector()
                                        ? branch.amplitude(BasisConfig{out})
                                        : Amplitude{};
              const auto row = static_cast<Eigen::Index>(oracle::full_index(m, stokes_out, out));
              worst = std::max(worst, std::abs(got - dense(row, col)));
            }
          }
        }
      }
    }
  }
  return {worst <= 1e-13, fmt::format("max entry error {:.3e} (<= 1e-13)", worst)};
}

Outcome second_photon() {
  const auto two = laser(2);
  double worst = 0.0, worst_dense = 0.0;
  for (int m = 1; m <= 10; ++m) {
    for (double j : {0.1, 0.2, 0.3}) {
      const auto params = ModelParams::create(m, j);
      const auto rec = tree_records(run_exact_tree(params, MediumState::all_ground(m), two), two, 0);
      worst = std::max(worst, std::abs(rec[1].p_elastic - oracle_pl2(params)));
      if (m <= 6) worst_dense = std::max(worst_dense, std::abs(rec[1].p_elastic - oracle::dense_pl2(m, j)));
    }
  }
  double worst_m1 = 0.0;
  for (double j : {0.1, 0.2, 0.3}) {
    const double p = std::cos(j) * std::cos(j);
    const auto params = ModelParams::create(1, j);
    const auto rec = tree_records(run_exact_tree(params, MediumState::all_ground(1), two), two, 0);
    worst_m1 = std::max(worst_m1, std::abs(rec[1].p_elastic - (p * p + 1.0 - p)));
  }
  return {worst <= 1e-10 && worst_dense <= 1e-10 && worst_m1 <= 1e-10,
          fmt::format("tree vs closed form {:.3e}, vs dense simulation {:.3e}, "
                      "M=1 vs p^2+1-p {:.3e} (all <= 1e-10)",
                      worst, worst_dense, worst_m1)};
}

Outcome expansion_order() {
  std::vector<double> xs, residuals;
  for (double x : {0.1, 0.05, 0.025}) {
    xs.push_back(x);
    residuals.push_back(oracle_ratio(ModelParams::create(10, std::sqrt(x / 10.0))).residual);
  }
  const double slope = fit_loglog(xs, residuals).slope;
  return {std::abs(slope - 4.0) <= 0.2,
          fmt::format("log-log slope {:.4f} (expected 4 +- 0.2)", slope)};
}

Outcome cooperative() {
  const auto start = Clock::now();
  const std::vector<int> ms{8, 16, 32, 64};
  const double slope = cooperative_slope(ms, 0.02).fit.slope;
  const double t = seconds_since(start);
  return {slope >= 1.9 && slope <= 2.1 && t < 10.0,
          fmt::format("log-log slope {:.4f} (expected in [1.9, 2.1]), {:.3f} s (< 10 s)", slope, t)};
}

Outcome interference() {
  const auto two = laser(2);
  int tested = 0, holds = 0, reversed = 0;
  for (int m = 3; m <= 10; ++m) {
    for (double j : {0.02, 0.05, 0.1}) {
      const auto params = ModelParams::create(m, j);
      const auto full = tree_records(run_exact_tree(params, MediumState::all_ground(m), two), two, 0);
      TreeOptions capped;
      capped.sweep.max_conversions = 1;
      const auto trunc = tree_records(
          run_exact_tree(params, MediumState::all_ground(m), two, capped), two, 0);
      ++tested;
      if (full[1].p_inelastic > full[0].p_inelastic) ++holds;
      if (trunc[1].p_inelastic < trunc[0].p_inelastic) ++reversed;
    }
  }
  return {holds == tested && reversed == tested,
          fmt::format("P_S(2) > P_S(1) in {}/{} cases, reversed without double conversion in "
                      "{}/{} (M 3..10, J 0.02..0.1)",
                      holds, tested, reversed, tested)};
}

Outcome decay() {
  double worst = 0.0;
  for (double j : {0.01, 0.1, 0.3}) {
    const auto params = ModelParams::create(1, j);
    MediumState state = MediumState::all_excited(1);
    for (int n = 1; n <= 10000; ++n) {
      state = sweep(state, PhotonSpin::S, params, kExact).elastic;
      const Amplitude got = state.empty() ? Amplitude{} : state.amplitude(BasisConfig{1});
      worst = std::max(worst, std::abs(got - std::pow(std::cos(j), n)));
    }
  }
  return {worst <= 1e-12, fmt::format("max amplitude error {:.3e} over N <= 10^4 (<= 1e-12)", worst)};
}

Outcome sf_limit() {
  const std::vector<double> js{0.1, 0.05, 0.025};
  std::vector<double> diffs;
  const double gamma = 1.0, t = 2.0;
  for (double j : js) {
    diffs.push_back(std::abs(std::pow(std::cos(j), gamma * t / (j * j)) - std::exp(-gamma * t / 2.0)));
  }
  const double slope = fit_loglog(js, diffs).slope;
  const double library = sf_limit_study(gamma, t, js).fit.slope;
  return {std::abs(slope - 2.0) <= 0.2 && std::abs(library - slope) <= 1e-9,
          fmt::format("log-log slope {:.4f} (expected 2 +- 0.2), library study {:.4f}", slope, library)};
}

Outcome pulse() {
  const auto start = Clock::now();
  const int m = 10;
  const auto params = ModelParams::create(m, 0.3);
  const auto result = run_kraus(params, MediumState::all_ground(m), laser(300));
  std::vector<double> ps;
  for (const auto& r : result.photons) ps.push_back(r.p_stokes());
  const auto metrics = pulse_metrics(ps);
  const double mean = result.final_state.mean_excitation();
  const double t = seconds_since(start);
  const bool interior = metrics.peak_index > 0 && metrics.peak_index + 1 < ps.size();
  return {interior && metrics.final_value < 0.1 * metrics.peak_value && mean > 0.9 * m && t < 120.0,
          fmt::format("peak {:.4f} at photon {}, final {:.3e} (< 0.1 x peak), mean excitation "
                      "{:.4f} (> 9), {:.2f} s (< 120 s)",
                      metrics.peak_value, metrics.peak_index + 1, metrics.final_value, mean, t)};
}

Outcome mode_agreement() {
  const int m = 8;
  const auto params = ModelParams::create(m, 0.3);
  const auto spins = laser(100);
  const auto initial = MediumState::all_ground(m);
  const auto kraus = run_kraus(params, initial, spins).photons;

  McOptions options;
  options.trials = 10000;
  options.seed = 2026;
  std::vector<std::string> tables;
  std::vector<PhotonRecord> mc;
  for (unsigned threads : {1u, 2u, 8u}) {
    options.threads = threads;
    const auto stats = run_mc(params, initial, spins, options);
    mc = stats.records();
    tables.push_back(cli::photon_csv(mc, nlohmann::ordered_json::object()));
  }
  const bool identical = tables[0] == tables[1] && tables[0] == tables[2];
  int within = 0;
  for (std::size_t n = 0; n < spins.size(); ++n) {
    const double sigma = mc[n].std_error;
    const double diff = std::abs(mc[n].p_stokes() - kraus[n].p_stokes());
    // A zero standard error only matches an exact hit.
    if (diff <= 3.0 * sigma || diff == 0.0) ++within;
  }
  return {within >= 97 && identical,
          fmt::format("{}/100 photons within 3 sigma (>= 97), output at 1/2/8 threads {}", within,
                      identical ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"first-photon exactness", first_photon},
      {"unitarity", unitarity},
      {"matrix-product equivalence", matrix_product},
      {"second-photon audit", second_photon},
      {"expansion order", expansion_order},
      {"cooperative M^2 law", cooperative},
      {"interference direction", interference},
      {"decay law", decay},
      {"superfluorescence limit", sf_limit},
      {"pulse shape", pulse},
      {"mode agreement", mode_agreement},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("threw: {}", e.what())};
    }
    if (!outcome.passed) ++failed;
    std::printf("%s  %-28s %s\n", outcome.passed ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
