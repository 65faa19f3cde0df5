#include "srs/medium_state.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srs/errors.hpp"

namespace srs {

void check_atom_count(int m) {
  if (m < 0 || m > kMaxAtoms) {
    throw CapacityError(fmt::format(
        "atom count {} outside supported range 0..{}", m, kMaxAtoms));
  }
}

MediumState MediumState::all_ground(int m) {
  check_atom_count(m);
  return MediumState(m, 0, {{Mask{0}, Amplitude{1.0, 0.0}}});
}

MediumState MediumState::all_excited(int m) {
  check_atom_count(m);
  return MediumState(m, m, {{full_mask(m), Amplitude{1.0, 0.0}}});
}

MediumState MediumState::zero(int m, int sector) {
  check_atom_count(m);
  if (sector < 0 || sector > m) {
    throw ArgumentError(
        fmt::format("sector {} impossible for {} atoms", sector, m));
  }
  return MediumState(m, sector, {});
}

MediumState MediumState::basis(int m, BasisConfig config) {
  check_atom_count(m);
  if ((config.bits & ~full_mask(m)) != 0) {
    throw ShapeError(
        fmt::format("mask {:#x} has bits beyond atom {}", config.bits, m));
  }
  return MediumState(m, config.excitations(), {{config.bits, Amplitude{1.0}}});
}

MediumState MediumState::from_entries(int m, std::vector<Entry> entries,
                                      double prune_eps) {
  check_atom_count(m);
  const Mask allowed = full_mask(m);
  int sector = -1;
  for (const auto& e : entries) {
    if ((e.mask & ~allowed) != 0) {
      throw ShapeError(
          fmt::format("mask {:#x} has bits beyond atom {}", e.mask, m));
    }
    const int k = std::popcount(e.mask);
    if (sector < 0) {
      sector = k;
    } else if (k != sector) {
      throw ShapeError(fmt::format(
          "entries mix excitation sectors {} and {}", sector, k));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.mask < b.mask; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().mask == e.mask) {
      merged.back().amplitude += e.amplitude;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [prune_eps](const Entry& e) {
    return e.amplitude == Amplitude{} || std::abs(e.amplitude) < prune_eps;
  });
  return MediumState(m, std::max(sector, 0), std::move(merged));
}

MediumState MediumState::from_sorted(int m, int sector,
                                     std::vector<Entry> entries) {
  std::erase_if(entries,
                [](const Entry& e) { return e.amplitude == Amplitude{}; });
  return MediumState(m, sector, std::move(entries));
}

double MediumState::squared_norm() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += std::norm(e.amplitude);
  return sum;
}

Amplitude MediumState::amplitude(BasisConfig config) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), config.bits,
      [](const Entry& e, Mask mask) { return e.mask < mask; });
  if (it == entries_.end() || it->mask != config.bits) return {};
  return it->amplitude;
}

MediumState MediumState::scaled(Amplitude factor) const {
  if (factor == Amplitude{}) return MediumState(m_, sector_, {});
  std::vector<Entry> out(entries_);
  for (auto& e : out) e.amplitude *= factor;
  return MediumState(m_, sector_, std::move(out));
}

MediumState MediumState::normalized() const {
  const double n2 = squared_norm();
  if (n2 == 0.0) throw UndefinedError("cannot normalize the zero state");
  return scaled(1.0 / std::sqrt(n2));
}

MediumState MediumState::pruned(double eps) const {
  if (eps <= 0.0) return *this;
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (std::abs(e.amplitude) >= eps) out.push_back(e);
  }
  return MediumState(m_, sector_, std::move(out));
}

Amplitude inner(const MediumState& a, const MediumState& b) {
  if (a.atoms() != b.atoms()) {
    throw ShapeError(fmt::format("inner product of states with {} and {} atoms",
                                 a.atoms(), b.atoms()));
  }
  if (a.sector() != b.sector()) return {};
  // Both entry lists are sorted: walk them together.
  Amplitude sum{};
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].mask < eb[j].mask) {
      ++i;
    } else if (eb[j].mask < ea[i].mask) {
      ++j;
    } else {
      sum += std::conj(ea[i].amplitude) * eb[j].amplitude;
      ++i;
      ++j;
    }
  }
  return sum;
}

std::vector<double> excitation_profile(const MediumState& state) {
  const double n2 = state.squared_norm();
  if (n2 == 0.0) {
    throw UndefinedError("excitation profile of a zero-norm state");
  }
  std::vector<double> profile(static_cast<std::size_t>(state.atoms()), 0.0);
  for (const auto& e : state.entries()) {
    const double w = std::norm(e.amplitude);
    for (Mask bits = e.mask; bits != 0; bits &= bits - 1) {
      profile[static_cast<std::size_t>(std::countr_zero(bits))] += w;
    }
  }
  for (auto& v : profile) v /= n2;
  return profile;
}

double sector_dimension(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (m - k + i) / i;
  return std::round(result);
}

std::vector<Mask> sector_masks(int m, int k) {
  check_atom_count(m);
  if (k < 0 || k > m) return {};
  std::vector<Mask> masks;
  masks.reserve(static_cast<std::size_t>(sector_dimension(m, k)));
  if (k == 0) {
    masks.push_back(0);
    return masks;
  }
  const Mask last = full_mask(m) ^ full_mask(m - k);
  // Gosper's hack enumerates same-popcount masks in increasing order.
  Mask v = full_mask(k);
  while (true) {
    masks.push_back(v);
    if (v == last) break;
    const Mask t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return masks;
}

}  // namespace srs
