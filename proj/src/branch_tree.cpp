#include <cmath>

#include <fmt/format.h>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"

namespace srs {

namespace {

int sector_shift(PhotonSpin in, PhotonSpin out) {
  if (in == out) return 0;
  return in == PhotonSpin::L ? 1 : -1;
}

double entropy_of(const std::map<int, double>& weights, double total) {
  double h = 0.0;
  for (const auto& [k, w] : weights) {
    const double q = w / total;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

}  // namespace

std::vector<BranchNode> run_exact_tree(const ModelParams& params,
                                       const MediumState& initial,
                                       std::span<const PhotonSpin> spins_in,
                                       const TreeOptions& options) {
  if (options.prune_eps < 0.0) {
    throw ArgumentError("prune_eps must be nonnegative");
  }
  if (initial.empty()) {
    throw UndefinedError("exact tree from the zero state");
  }
  std::vector<BranchNode> frontier;
  frontier.push_back({{}, initial, initial.squared_norm()});

  for (std::size_t n = 0; n < spins_in.size(); ++n) {
    const PhotonSpin spin = spins_in[n];
    std::vector<BranchNode> next;
    next.reserve(frontier.size() * 2);
    for (auto& node : frontier) {
      SweepResult r = sweep(node.state, spin, params, options.sweep);
      auto push = [&](MediumState&& branch, double prob, PhotonSpin exit) {
        if (branch.empty() || prob <= 0.0 || prob < options.prune_eps) return;
        BranchNode child{node.outcomes, std::move(branch), prob};
        child.outcomes.push_back(exit);
        next.push_back(std::move(child));
      };
      push(std::move(r.elastic), r.p_elastic, spin);
      push(std::move(r.inelastic), r.p_inelastic, flipped(spin));
      if (next.size() > options.max_branches) {
        throw ResourceError(fmt::format(
            "exact tree exceeds {} branches at photon {} of {}; raise "
            "prune_eps or use Kraus/Monte Carlo mode",
            options.max_branches, n + 1, spins_in.size()));
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<PhotonRecord> tree_records(std::span<const BranchNode> leaves,
                                       std::span<const PhotonSpin> spins_in,
                                       int initial_sector) {
  std::vector<PhotonRecord> records(spins_in.size());
  std::vector<int> sector(leaves.size(), initial_sector);
  double total = 0.0;
  for (const auto& leaf : leaves) total += leaf.probability;

  for (std::size_t n = 0; n < spins_in.size(); ++n) {
    PhotonRecord& rec = records[n];
    rec.spin_in = spins_in[n];
    std::map<int, double> weights;
    double mean = 0.0;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto& leaf = leaves[i];
      if (leaf.outcomes.size() <= n) {
        throw ShapeError("leaf history shorter than the photon stream");
      }
      const PhotonSpin exit = leaf.outcomes[n];
      if (exit == spins_in[n]) {
        rec.p_elastic += leaf.probability;
      } else {
        rec.p_inelastic += leaf.probability;
      }
      sector[i] += sector_shift(spins_in[n], exit);
      weights[sector[i]] += leaf.probability;
      mean += sector[i] * leaf.probability;
    }
    if (total > 0.0) {
      rec.mean_excitation = mean / total;
      rec.sector_entropy = entropy_of(weights, total);
    }
  }
  return records;
}

}  // namespace srs
