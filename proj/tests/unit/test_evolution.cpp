#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"
#include "srs/rng.hpp"
#include "support/oracles.hpp"
#include "support/random_states.hpp"

using namespace srs;

namespace {

std::vector<PhotonSpin> repeat(PhotonSpin s, std::size_t n) {
  return std::vector<PhotonSpin>(n, s);
}

}  // namespace

TEST_CASE("exact tree: one photon") {
  for (int m : {1, 3, 7}) {
    const auto params = ModelParams::create(m, 0.3);
    const auto spins = repeat(PhotonSpin::L, 1);
    const auto leaves = run_exact_tree(params, MediumState::all_ground(m), spins);
    REQUIRE(leaves.size() == 2);
    CHECK(leaves[0].outcomes == spins);
    CHECK(leaves[0].probability == doctest::Approx(std::pow(params.p, m)).epsilon(1e-14));
    CHECK(leaves[1].probability ==
          doctest::Approx(1.0 - std::pow(params.p, m)).epsilon(1e-13));
  }
}

TEST_CASE("exact tree: two photons on one atom") {
  for (double j : {0.1, 0.5, 1.2}) {
    const auto params = ModelParams::create(1, j);
    const auto spins = repeat(PhotonSpin::L, 2);
    const auto leaves = run_exact_tree(params, MediumState::all_ground(1), spins);
    const double p = params.p;
    double ee = -1;
    for (const auto& leaf : leaves) {
      if (leaf.outcomes == spins) ee = leaf.probability;
    }
    CHECK(ee == doctest::Approx(p * p).epsilon(1e-14));
    const auto rec = tree_records(leaves, spins, 0);
    CHECK(rec[1].p_elastic == doctest::Approx(p * p + (1 - p)).epsilon(1e-13));
  }
}

TEST_CASE("exact tree: zero coupling keeps one branch") {
  const auto params = ModelParams::create(5, 0.0);
  const auto leaves =
      run_exact_tree(params, MediumState::all_ground(5), repeat(PhotonSpin::L, 12));
  REQUIRE(leaves.size() == 1);
  CHECK(leaves[0].probability == 1.0);
}

TEST_CASE("exact tree: probabilities sum to one and histories are kept apart") {
  const auto params = ModelParams::create(4, 0.6);
  const auto spins = parse_spins("LLLS");
  const auto leaves = run_exact_tree(params, MediumState::all_ground(4), spins);
  double total = 0;
  std::set<std::string> histories;
  for (const auto& leaf : leaves) {
    total += leaf.probability;
    CHECK(leaf.probability == doctest::Approx(leaf.state.squared_norm()).epsilon(1e-12));
    histories.insert(to_string(leaf.outcomes));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(histories.size() == leaves.size());
}

TEST_CASE("exact tree: branch budget") {
  const auto params = ModelParams::create(6, 0.5);
  TreeOptions opts;
  opts.max_branches = 8;
  try {
    run_exact_tree(params, MediumState::all_ground(6), repeat(PhotonSpin::L, 6), opts);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("photon 4") != std::string::npos);
  }
  opts.prune_eps = -1;
  CHECK_THROWS_AS(run_exact_tree(params, MediumState::all_ground(6),
                                 repeat(PhotonSpin::L, 1), opts),
                  ArgumentError);
}

TEST_CASE("exact tree matches dense multi-photon simulation") {
  const int m = 3;
  const double j = 0.8;
  const auto spins = parse_spins("LLSL");
  const auto params = ModelParams::create(m, j);
  const Mask start = 0b010;
  const auto leaves =
      run_exact_tree(params, MediumState::basis(m, BasisConfig{start}), spins);
  const auto rec = tree_records(leaves, spins, 1);

  oracle::DenseSimulator sim(m, 4, j);
  sim.set_initial(start, {false, false, true, false});
  for (int n = 0; n < 4; ++n) sim.send_photon(n);
  for (int n = 0; n < 4; ++n) {
    CHECK(rec[static_cast<std::size_t>(n)].p_stokes() ==
          doctest::Approx(sim.stokes_probability(n)).epsilon(1e-12));
  }
  CHECK(rec.back().mean_excitation == doctest::Approx(sim.mean_excitation()).epsilon(1e-12));
}

TEST_CASE("Kraus marginals equal tree marginals") {
  for (int m : {2, 4, 8}) {
    for (std::size_t n : {1u, 2u, 10u}) {
      const auto params = ModelParams::create(m, 0.3);
      const auto spins = repeat(PhotonSpin::L, n);
      const auto init = MediumState::all_ground(m);
      const auto tree = tree_records(run_exact_tree(params, init, spins), spins, 0);
      const auto kraus = run_kraus(params, init, spins);
      REQUIRE(kraus.photons.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(kraus.photons[i].p_elastic - tree[i].p_elastic) < 1e-10);
        CHECK(std::abs(kraus.photons[i].p_inelastic - tree[i].p_inelastic) < 1e-10);
        CHECK(std::abs(kraus.photons[i].mean_excitation - tree[i].mean_excitation) < 1e-10);
        CHECK(std::abs(kraus.photons[i].sector_entropy - tree[i].sector_entropy) < 1e-10);
      }
    }
  }
}

TEST_CASE("Kraus blocks stay Hermitian, positive and trace one") {
  const auto params = ModelParams::create(6, 0.5);
  const auto spins = parse_spins("LLLLLLSLLSSL");
  const auto result = run_kraus(params, MediumState::all_ground(6), spins);
  CHECK(result.final_state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& rec : result.photons) {
    CHECK(rec.p_elastic + rec.p_inelastic == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (const auto& [k, rho] : result.final_state.blocks()) {
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("Kraus with complex amplitudes and mixed spins") {
  std::mt19937_64 rng(5);
  const int m = 4;
  const auto params = ModelParams::create(m, 0.7);
  const auto init = testing_support::random_state(rng, m, 2);
  const auto spins = parse_spins("LSSLSL");
  const auto tree = tree_records(run_exact_tree(params, init, spins), spins, 2);
  const auto kraus = run_kraus(params, init, spins);
  for (std::size_t i = 0; i < spins.size(); ++i) {
    CHECK(std::abs(kraus.photons[i].p_inelastic - tree[i].p_inelastic) < 1e-10);
  }
  CHECK(kraus.final_state.trace() == doctest::Approx(1.0).epsilon(1e-12));

  // Profile of the final mixture against the tree leaves.
  const auto leaves = run_exact_tree(params, init, spins);
  std::vector<double> profile(m, 0.0);
  for (const auto& leaf : leaves) {
    const auto p = excitation_profile(leaf.state);
    for (int a = 0; a < m; ++a) profile[static_cast<std::size_t>(a)] += leaf.probability * p[static_cast<std::size_t>(a)];
  }
  const auto kp = kraus.final_state.excitation_profile();
  for (int a = 0; a < m; ++a) {
    CHECK(kp[static_cast<std::size_t>(a)] == doctest::Approx(profile[static_cast<std::size_t>(a)]).epsilon(1e-10));
  }
}

TEST_CASE("Kraus sector bookkeeping and monotone inversion") {
  const int m = 7;
  const auto params = ModelParams::create(m, 0.4);
  double previous = 0.0;
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto spins = repeat(PhotonSpin::L, n);
    const auto result = run_kraus(params, MediumState::all_ground(m), spins);
    for (const auto& [k, rho] : result.final_state.blocks()) {
      CHECK(k <= static_cast<int>(n));
    }
    const double mean = result.final_state.mean_excitation();
    CHECK(mean >= previous - 1e-12);
    previous = mean;
  }
}

TEST_CASE("Kraus cap") {
  const auto params = ModelParams::create(15, 0.1);
  const auto spins = repeat(PhotonSpin::L, 1);
  CHECK_THROWS_AS(run_kraus(params, MediumState::all_ground(15), spins), ResourceError);
  KrausOptions opts;
  opts.allow_large = true;
  const auto r = run_kraus(params, MediumState::all_ground(15), spins, opts);
  CHECK(r.photons[0].p_elastic == doctest::Approx(std::pow(params.p, 15)));
}

TEST_CASE("Kraus first photons and zero coupling") {
  const auto params = ModelParams::create(5, 0.2);
  const auto r = run_kraus(params, MediumState::all_ground(5), repeat(PhotonSpin::L, 2));
  CHECK(r.photons[0].p_elastic == doctest::Approx(std::pow(params.p, 5)).epsilon(1e-14));
  CHECK(r.photons[1].p_elastic == doctest::Approx(oracle::dense_pl2(5, 0.2)).epsilon(1e-12));
  const auto z = run_kraus(ModelParams::create(5, 0.0), MediumState::all_ground(5),
                           repeat(PhotonSpin::L, 7));
  for (const auto& rec : z.photons) CHECK(rec.p_elastic == 1.0);
}

TEST_CASE("Monte Carlo: zero coupling never converts nor draws") {
  const auto params = ModelParams::create(4, 0.0);
  McOptions opts;
  opts.trials = 100;
  const auto stats = run_mc(params, MediumState::all_ground(4), repeat(PhotonSpin::L, 20), opts);
  for (auto c : stats.inelastic_counts) CHECK(c == 0);
  CHECK(stats.rng_draws == 0);
  CHECK(stats.trials == 100);
}

TEST_CASE("Monte Carlo: reproducible and thread independent") {
  const auto params = ModelParams::create(5, 0.4);
  const auto spins = repeat(PhotonSpin::L, 15);
  McOptions opts;
  opts.trials = 300;
  opts.seed = 1234;
  const auto a = run_mc(params, MediumState::all_ground(5), spins, opts);
  opts.threads = 3;
  const auto b = run_mc(params, MediumState::all_ground(5), spins, opts);
  CHECK(a.inelastic_counts == b.inelastic_counts);
  CHECK(a.sector_counts == b.sector_counts);
  CHECK(a.final_profile_sum == b.final_profile_sum);
  CHECK(a.rng_draws == b.rng_draws);
  opts.seed = 1235;
  const auto c = run_mc(params, MediumState::all_ground(5), spins, opts);
  CHECK(a.inelastic_counts != c.inelastic_counts);
}

TEST_CASE("Monte Carlo agrees with Kraus") {
  const auto params = ModelParams::create(4, 0.5);
  const auto spins = repeat(PhotonSpin::L, 10);
  McOptions opts;
  opts.trials = 4000;
  opts.seed = 77;
  const auto mc = run_mc(params, MediumState::all_ground(4), spins, opts);
  const auto kraus = run_kraus(params, MediumState::all_ground(4), spins);
  const auto f = mc.inelastic_frequencies();
  const auto se = mc.standard_errors();
  int within = 0;
  for (std::size_t n = 0; n < spins.size(); ++n) {
    if (std::abs(f[n] - kraus.photons[n].p_inelastic) <= 3 * se[n]) ++within;
  }
  CHECK(within >= 9);
  const auto rec = mc.records();
  CHECK(rec.back().mean_excitation ==
        doctest::Approx(kraus.photons.back().mean_excitation).epsilon(0.05));
}

TEST_CASE("Monte Carlo: single-atom decay") {
  const double j = 0.2;
  const std::size_t n = 25;
  const auto params = ModelParams::create(1, j);
  McOptions opts;
  opts.trials = 20000;
  opts.seed = 3;
  const auto stats = run_mc(params, MediumState::all_excited(1), repeat(PhotonSpin::S, n), opts);
  const double survival = static_cast<double>(stats.sector_counts.back()[1]) / 20000.0;
  const double expected = std::pow(std::cos(j), 2.0 * n);
  CHECK(std::abs(survival - expected) < 4 * std::sqrt(expected * (1 - expected) / 20000.0));
  CHECK(stats.final_profile_mean()[0] == doctest::Approx(survival));
}

TEST_CASE("Monte Carlo errors and merge") {
  const auto params = ModelParams::create(2, 0.3);
  McOptions opts;
  opts.trials = 0;
  CHECK_THROWS_AS(run_mc(params, MediumState::all_ground(2), repeat(PhotonSpin::L, 2), opts),
                  ArgumentError);
  opts.trials = 10;
  auto a = run_mc(params, MediumState::all_ground(2), repeat(PhotonSpin::L, 2), opts);
  auto b = run_mc(params, MediumState::all_ground(2), repeat(PhotonSpin::L, 3), opts);
  CHECK_THROWS_AS(a.merge(b), ShapeError);
  const auto before = a.inelastic_counts;
  a.merge(a);
  CHECK(a.trials == 20);
  CHECK(a.inelastic_counts[0] == 2 * before[0]);
}

TEST_CASE("counter-based streams") {
  CounterRng a = CounterRng::for_trajectory(42, 7);
  CounterRng b(mix64(42) ^ 7);
  for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());
  CHECK(a.draws() == 5);
  CHECK(a.at(2) == CounterRng(mix64(42) ^ 7).at(2));
  double lo = 1, hi = 0;
  CounterRng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
}
