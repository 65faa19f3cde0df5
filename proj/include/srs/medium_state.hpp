#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace srs {

using Mask = std::uint64_t;
using Amplitude = std::complex<double>;

/// Largest medium a basis mask can describe.
inline constexpr int kMaxAtoms = 64;

/// Amplitudes with smaller modulus are dropped from stored states.
inline constexpr double kDefaultPrune = 1e-14;

/// Bit for atom `atom` (1-indexed from the photon-entry edge).
constexpr Mask atom_bit(int atom) { return Mask{1} << (atom - 1); }

/// Mask with the lowest `m` bits set.
constexpr Mask full_mask(int m) {
  return m >= 64 ? ~Mask{0} : (Mask{1} << m) - 1;
}

/// One basis configuration of the medium: bit a-1 set means atom a is
/// excited.
struct BasisConfig {
  Mask bits = 0;

  int excitations() const { return std::popcount(bits); }
  bool excited(int atom) const { return (bits & atom_bit(atom)) != 0; }

  friend auto operator<=>(const BasisConfig&, const BasisConfig&) = default;
};

/// Sparse superposition of basis configurations that all carry the same
/// number of excitations. Entries are kept sorted by mask, unique, and
/// nonzero. Values are immutable once built.
class MediumState {
 public:
  struct Entry {
    Mask mask;
    Amplitude amplitude;
  };

  /// All atoms in the ground state.
  static MediumState all_ground(int m);
  /// Fully inverted medium.
  static MediumState all_excited(int m);
  /// The zero vector of a given sector.
  static MediumState zero(int m, int sector);
  /// Single basis configuration with unit amplitude.
  static MediumState basis(int m, BasisConfig config);

  /// Builds a state from arbitrary (unsorted, possibly repeated) entries.
  /// Repeated masks are summed; entries with modulus below `prune_eps`
  /// are dropped. Every mask must fit in `m` bits and share one popcount.
  static MediumState from_entries(int m, std::vector<Entry> entries,
                                  double prune_eps = kDefaultPrune);

  /// Trusted constructor for kernels that already produce sorted, unique,
  /// same-sector entries. Exact zeros are removed; nothing else is checked.
  static MediumState from_sorted(int m, int sector, std::vector<Entry> entries);

  int atoms() const { return m_; }
  int sector() const { return sector_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double squared_norm() const;
  Amplitude amplitude(BasisConfig config) const;

  MediumState scaled(Amplitude factor) const;
  /// Unit-norm copy. Throws UndefinedError for the zero state.
  MediumState normalized() const;
  MediumState pruned(double eps) const;

 private:
  MediumState(int m, int sector, std::vector<Entry> entries)
      : m_(m), sector_(sector), entries_(std::move(entries)) {}

  int m_ = 0;
  int sector_ = 0;
  std::vector<Entry> entries_;
};

/// <a|b>, conjugate-linear in `a`. Exactly zero across sectors.
Amplitude inner(const MediumState& a, const MediumState& b);

/// Probability that each atom is excited, normalized by the squared norm.
std::vector<double> excitation_profile(const MediumState& state);

/// All masks of `m` atoms with exactly `k` excitations, ascending.
std::vector<Mask> sector_masks(int m, int k);

/// Binomial coefficient as double (sector dimension).
double sector_dimension(int m, int k);

/// Throws CapacityError unless 0 <= m <= kMaxAtoms.
void check_atom_count(int m);

}  // namespace srs
