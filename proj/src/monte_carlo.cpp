#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"
#include "srs/rng.hpp"

namespace srs {

namespace {

// Trajectories are reduced in fixed-size blocks, and blocks are combined
// in index order, so floating-point sums do not depend on the thread count.
constexpr std::uint64_t kBlockSize = 64;

TrajectoryStats empty_stats(const MediumState& initial,
                            std::span<const PhotonSpin> spins_in) {
  TrajectoryStats stats;
  stats.atoms = initial.atoms();
  stats.spins_in.assign(spins_in.begin(), spins_in.end());
  stats.inelastic_counts.assign(spins_in.size(), 0);
  stats.sector_counts.assign(
      spins_in.size(),
      std::vector<std::uint64_t>(static_cast<std::size_t>(initial.atoms()) + 1, 0));
  stats.final_profile_sum.assign(static_cast<std::size_t>(initial.atoms()), 0.0);
  return stats;
}

void run_trajectory(const ModelParams& params, const MediumState& start,
                    std::span<const PhotonSpin> spins_in,
                    const SweepOptions& sweep_options, CounterRng rng,
                    TrajectoryStats& acc) {
  MediumState state = start;
  for (std::size_t n = 0; n < spins_in.size(); ++n) {
    SweepResult r = sweep(state, spins_in[n], params, sweep_options);
    const double total = r.p_elastic + r.p_inelastic;
    const double q = r.p_inelastic / total;
    bool converted;
    if (q <= 0.0) {
      converted = false;
    } else if (q >= 1.0) {
      converted = true;
    } else {
      converted = rng.uniform() < q;
    }
    if (converted) {
      ++acc.inelastic_counts[n];
      state = r.inelastic.scaled(1.0 / std::sqrt(r.p_inelastic));
    } else {
      state = r.elastic.scaled(1.0 / std::sqrt(r.p_elastic));
    }
    ++acc.sector_counts[n][static_cast<std::size_t>(state.sector())];
  }
  const auto profile = excitation_profile(state);
  for (std::size_t a = 0; a < profile.size(); ++a) {
    acc.final_profile_sum[a] += profile[a];
  }
  acc.rng_draws += rng.draws();
}

}  // namespace

TrajectoryStats run_mc(const ModelParams& params, const MediumState& initial,
                       std::span<const PhotonSpin> spins_in,
                       const McOptions& options) {
  if (options.trials == 0) {
    throw ArgumentError("Monte Carlo needs at least one trial");
  }
  if (initial.atoms() != params.m) {
    throw ShapeError(fmt::format("state has {} atoms but params have {}",
                                 initial.atoms(), params.m));
  }
  const MediumState start = initial.normalized();
  const std::uint64_t n_blocks =
      (options.trials + kBlockSize - 1) / kBlockSize;
  std::vector<TrajectoryStats> partial(n_blocks, empty_stats(start, spins_in));

  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&] {
    for (std::uint64_t blk = next_block++; blk < n_blocks; blk = next_block++) {
      const std::uint64_t first = blk * kBlockSize;
      const std::uint64_t last = std::min(options.trials, first + kBlockSize);
      TrajectoryStats& acc = partial[blk];
      for (std::uint64_t i = first; i < last; ++i) {
        run_trajectory(params, start, spins_in, options.sweep,
                       CounterRng::for_trajectory(options.seed, i), acc);
      }
      acc.trials = last - first;
    }
  };

  const unsigned threads = static_cast<unsigned>(std::clamp<std::uint64_t>(
      options.threads == 0 ? 1 : options.threads, 1, n_blocks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  TrajectoryStats stats = empty_stats(start, spins_in);
  stats.seed = options.seed;
  for (const auto& p : partial) stats.merge(p);
  return stats;
}

void TrajectoryStats::merge(const TrajectoryStats& other) {
  if (other.inelastic_counts.size() != inelastic_counts.size() ||
      other.atoms != atoms) {
    throw ShapeError("merging trajectory statistics of different runs");
  }
  trials += other.trials;
  rng_draws += other.rng_draws;
  for (std::size_t n = 0; n < inelastic_counts.size(); ++n) {
    inelastic_counts[n] += other.inelastic_counts[n];
    for (std::size_t k = 0; k < sector_counts[n].size(); ++k) {
      sector_counts[n][k] += other.sector_counts[n][k];
    }
  }
  for (std::size_t a = 0; a < final_profile_sum.size(); ++a) {
    final_profile_sum[a] += other.final_profile_sum[a];
  }
}

std::vector<double> TrajectoryStats::inelastic_frequencies() const {
  std::vector<double> f(inelastic_counts.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    f[n] = static_cast<double>(inelastic_counts[n]) / static_cast<double>(trials);
  }
  return f;
}

std::vector<double> TrajectoryStats::standard_errors() const {
  auto f = inelastic_frequencies();
  for (auto& v : f) v = std::sqrt(v * (1.0 - v) / static_cast<double>(trials));
  return f;
}

std::vector<double> TrajectoryStats::final_profile_mean() const {
  std::vector<double> mean(final_profile_sum);
  for (auto& v : mean) v /= static_cast<double>(trials);
  return mean;
}

std::vector<PhotonRecord> TrajectoryStats::records() const {
  const auto freq = inelastic_frequencies();
  const auto err = standard_errors();
  std::vector<PhotonRecord> out(freq.size());
  const double t = static_cast<double>(trials);
  for (std::size_t n = 0; n < out.size(); ++n) {
    PhotonRecord& rec = out[n];
    rec.spin_in = spins_in[n];
    rec.p_inelastic = freq[n];
    rec.p_elastic = 1.0 - freq[n];
    rec.std_error = err[n];
    double mean = 0.0;
    for (std::size_t k = 0; k < sector_counts[n].size(); ++k) {
      const double q = static_cast<double>(sector_counts[n][k]) / t;
      mean += static_cast<double>(k) * q;
      if (q > 0.0) rec.sector_entropy -= q * std::log(q);
    }
    rec.mean_excitation = mean;
  }
  return out;
}

}  // namespace srs
