#include "srs/vertex_sweep.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srs/errors.hpp"

namespace srs {

std::vector<PhotonSpin> parse_spins(const std::string& text) {
  std::vector<PhotonSpin> spins;
  spins.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case 'L':
      case 'l':
        spins.push_back(PhotonSpin::L);
        break;
      case 'S':
      case 's':
        spins.push_back(PhotonSpin::S);
        break;
      default:
        throw ArgumentError(
            fmt::format("invalid photon spin '{}' in \"{}\"", ch, text));
    }
  }
  return spins;
}

std::string to_string(const std::vector<PhotonSpin>& spins) {
  std::string out;
  out.reserve(spins.size());
  for (auto s : spins) out.push_back(to_char(s));
  return out;
}

namespace {

using Entry = MediumState::Entry;
using Entries = std::vector<Entry>;

// Appends the sorted union of `a` and `b` to `out`, summing shared masks.
void merge_into(const Entries& a, const Entries& b, Entries& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i].mask < b[k].mask) {
      out.push_back(a[i++]);
    } else if (b[k].mask < a[i].mask) {
      out.push_back(b[k++]);
    } else {
      out.push_back({a[i].mask, a[i].amplitude + b[k].amplitude});
      ++i;
      ++k;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
}

// Splits one channel at atom `bit` into the part that keeps the photon
// spin and the part that converts. Setting or clearing the same bit on
// every mask preserves their order, so both outputs stay sorted.
void cross_atom(const Entries& in, PhotonSpin spin, Mask bit,
                const VertexRules& rules, Entries& kept, Entries& converted) {
  kept.clear();
  converted.clear();
  const bool can_stay = rules.stay != Amplitude{};
  const bool can_convert = rules.convert != Amplitude{};
  // L interacts with ground atoms, S with excited ones.
  const bool active_when_set = spin == PhotonSpin::S;
  for (const auto& e : in) {
    const bool set = (e.mask & bit) != 0;
    if (set != active_when_set) {
      kept.push_back(e);
      continue;
    }
    if (can_stay) kept.push_back({e.mask, rules.stay * e.amplitude});
    if (can_convert) {
      converted.push_back({e.mask ^ bit, rules.convert * e.amplitude});
    }
  }
}

struct ChannelSet {
  std::vector<Entries> channels;
  // Target channel of a conversion out of channel i, or -1 to drop it.
  std::vector<int> target;
};

ChannelSet run_channels(const MediumState& state, PhotonSpin spin,
                        const ModelParams& params, int max_conversions) {
  if (state.atoms() != params.m) {
    throw ShapeError(fmt::format("state has {} atoms but params have {}",
                                 state.atoms(), params.m));
  }
  if (state.empty()) {
    throw UndefinedError("sweep of the zero state has undefined branches");
  }
  const VertexRules rules = VertexRules::from(params);
  const std::size_t n =
      max_conversions < 0 ? 2 : static_cast<std::size_t>(max_conversions) + 1;
  ChannelSet set;
  set.channels.resize(n);
  set.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (max_conversions < 0) {
      set.target[i] = static_cast<int>(1 - i);
    } else {
      set.target[i] = i + 1 < n ? static_cast<int>(i + 1) : -1;
    }
  }
  set.channels[0].assign(state.entries().begin(), state.entries().end());

  std::vector<Entries> kept(n), converted(n);
  for (int atom = 1; atom <= params.m; ++atom) {
    const Mask bit = atom_bit(atom);
    for (std::size_t i = 0; i < n; ++i) {
      const PhotonSpin local = (i % 2 == 0) ? spin : flipped(spin);
      cross_atom(set.channels[i], local, bit, rules, kept[i], converted[i]);
    }
    for (auto& ch : set.channels) ch.clear();
    for (std::size_t i = 0; i < n; ++i) {
      // Exactly one source converts into each reachable target.
      const Entries* incoming = nullptr;
      for (std::size_t s = 0; s < n; ++s) {
        if (set.target[s] == static_cast<int>(i)) incoming = &converted[s];
      }
      if (incoming == nullptr || incoming->empty()) {
        std::swap(set.channels[i], kept[i]);
      } else {
        merge_into(kept[i], *incoming, set.channels[i]);
      }
    }
  }
  return set;
}

int channel_sector(const MediumState& state, PhotonSpin spin, std::size_t i) {
  const int shift = (i % 2 == 0) ? 0 : (spin == PhotonSpin::L ? 1 : -1);
  return std::clamp(state.sector() + shift, 0, state.atoms());
}

MediumState finish(const MediumState& state, int sector, Entries entries,
                   double prune_eps) {
  if (prune_eps > 0.0) {
    std::erase_if(entries, [prune_eps](const Entry& e) {
      return std::abs(e.amplitude) < prune_eps;
    });
  }
  return MediumState::from_sorted(state.atoms(), sector, std::move(entries));
}

}  // namespace

SweepResult sweep(const MediumState& state, PhotonSpin spin,
                  const ModelParams& params, const SweepOptions& options) {
  ChannelSet set = run_channels(state, spin, params, options.max_conversions);
  Entries even, odd;
  if (options.max_conversions < 0) {
    even = std::move(set.channels[0]);
    odd = std::move(set.channels[1]);
  } else {
    Entries buffer;
    for (std::size_t i = 0; i < set.channels.size(); ++i) {
      Entries& acc = (i % 2 == 0) ? even : odd;
      merge_into(acc, set.channels[i], buffer);
      std::swap(acc, buffer);
    }
  }
  SweepResult result{
      finish(state, channel_sector(state, spin, 0), std::move(even),
             options.prune_eps),
      finish(state, channel_sector(state, spin, 1), std::move(odd),
             options.prune_eps),
      0.0, 0.0};
  result.p_elastic = result.elastic.squared_norm();
  result.p_inelastic = result.inelastic.squared_norm();
  return result;
}

std::vector<MediumState> sweep_subchannels(const MediumState& state,
                                           PhotonSpin spin,
                                           const ModelParams& params,
                                           int max_conversions,
                                           double prune_eps) {
  if (max_conversions < 0) {
    throw ArgumentError("sub-channel resolution needs a conversion cap >= 0");
  }
  ChannelSet set = run_channels(state, spin, params, max_conversions);
  std::vector<MediumState> out;
  out.reserve(set.channels.size());
  for (std::size_t i = 0; i < set.channels.size(); ++i) {
    out.push_back(finish(state, channel_sector(state, spin, i),
                         std::move(set.channels[i]), prune_eps));
  }
  return out;
}

std::vector<Amplitude> first_photon_wavefunction(const ModelParams& params) {
  if (params.m < 1) {
    throw UndefinedError("first-photon wavefunction of an empty medium");
  }
  const auto result = sweep(MediumState::all_ground(params.m), PhotonSpin::L,
                            params, SweepOptions{0.0, -1});
  std::vector<Amplitude> phi(static_cast<std::size_t>(params.m));
  for (int a = 1; a <= params.m; ++a) {
    phi[static_cast<std::size_t>(a - 1)] =
        result.inelastic.amplitude(BasisConfig{atom_bit(a)});
  }
  return phi;
}

}  // namespace srs
