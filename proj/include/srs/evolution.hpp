#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srs/medium_state.hpp"
#include "srs/model_params.hpp"
#include "srs/vertex_sweep.hpp"

namespace srs {

/// Per-photon summary shared by all three evolution modes.
struct PhotonRecord {
  PhotonSpin spin_in = PhotonSpin::L;
  double p_elastic = 0.0;
  double p_inelastic = 0.0;
  /// Standard error of the inelastic frequency (Monte Carlo only, else NaN).
  double std_error = std::numeric_limits<double>::quiet_NaN();
  /// Mean excitation number of the medium after this photon.
  double mean_excitation = 0.0;
  /// Shannon entropy (nats) of the excitation-sector distribution.
  double sector_entropy = 0.0;

  /// Probability that the photon leaves as a Stokes photon.
  double p_stokes() const {
    return spin_in == PhotonSpin::L ? p_inelastic : p_elastic;
  }
};

// ---------------------------------------------------------------------------
// Exact branch tree

/// One fully resolved outcome history.
struct BranchNode {
  std::vector<PhotonSpin> outcomes;  // exit spin of each photon
  MediumState state;                 // unnormalized
  double probability = 0.0;          // squared norm of `state`
};

struct TreeOptions {
  /// Branches with smaller probability are discarded.
  double prune_eps = 0.0;
  std::size_t max_branches = std::size_t{1} << 20;
  SweepOptions sweep{0.0, -1};
};

/// Expands the out-state photon by photon without merging histories.
/// Throws ResourceError naming the depth at which the branch budget is
/// exceeded.
std::vector<BranchNode> run_exact_tree(const ModelParams& params,
                                       const MediumState& initial,
                                       std::span<const PhotonSpin> spins_in,
                                       const TreeOptions& options = {});

/// Marginals, mean excitation and sector entropy per photon, computed from
/// the leaves of a complete tree.
std::vector<PhotonRecord> tree_records(std::span<const BranchNode> leaves,
                                       std::span<const PhotonSpin> spins_in,
                                       int initial_sector);

// ---------------------------------------------------------------------------
// Sector-blocked Kraus evolution

/// Block-diagonal density operator: one dense block per excitation sector,
/// in the basis `sector_masks(m, k)`.
class SectorMixture {
 public:
  using Block = Eigen::MatrixXcd;

  SectorMixture() = default;
  explicit SectorMixture(int m) : m_(m) {}

  static SectorMixture pure(const MediumState& state);

  int atoms() const { return m_; }
  const std::map<int, Block>& blocks() const { return blocks_; }
  std::map<int, Block>& blocks() { return blocks_; }

  double trace() const;
  std::map<int, double> weights() const;
  double mean_excitation() const;
  double sector_entropy() const;
  std::vector<double> excitation_profile() const;

 private:
  int m_ = 0;
  std::map<int, Block> blocks_;
};

struct KrausOptions {
  /// Exact-mode atom cap; raising it requires `allow_large`.
  int max_atoms = 14;
  bool allow_large = false;
};

struct KrausResult {
  std::vector<PhotonRecord> photons;
  SectorMixture final_state;
};

/// Evolves the medium's reduced density operator: per photon, block k
/// receives A rho_k A^dagger from its own sector and C rho C^dagger from
/// the sector one conversion away. Throws ResourceError past the atom cap.
KrausResult run_kraus(const ModelParams& params, const MediumState& initial,
                      std::span<const PhotonSpin> spins_in,
                      const KrausOptions& options = {});

/// Dense restriction of the elastic (first) and inelastic (second) sweep
/// operators to sector k, in the bases of `sector_masks`.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sector_operators(
    const ModelParams& params, int k, PhotonSpin spin);

// ---------------------------------------------------------------------------
// Monte Carlo trajectories

struct McOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  SweepOptions sweep{};
};

/// Aggregated counts over trajectories. Counts merge by addition.
struct TrajectoryStats {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int atoms = 0;
  std::vector<PhotonSpin> spins_in;
  std::vector<std::uint64_t> inelastic_counts;  // per photon
  /// sector_counts[n][k]: trajectories in sector k after photon n.
  std::vector<std::vector<std::uint64_t>> sector_counts;
  std::vector<double> final_profile_sum;  // per atom
  std::uint64_t rng_draws = 0;

  std::vector<double> inelastic_frequencies() const;
  std::vector<double> standard_errors() const;
  std::vector<double> final_profile_mean() const;
  std::vector<PhotonRecord> records() const;

  /// Adds another partial result (same run shape).
  void merge(const TrajectoryStats& other);
};

/// Samples the exit of every photon from the sweep branch norms and
/// carries the renormalized branch forward. Trajectory i draws from
/// CounterRng::for_trajectory(seed, i); results do not depend on
/// `threads`. Throws ArgumentError for zero trials.
TrajectoryStats run_mc(const ModelParams& params, const MediumState& initial,
                       std::span<const PhotonSpin> spins_in,
                       const McOptions& options);

}  // namespace srs
