#pragma once

#include <string>
#include <vector>

#include "srs/medium_state.hpp"
#include "srs/model_params.hpp"

namespace srs {

/// Photon isospin: L (laser, up) or S (Stokes, down).
enum class PhotonSpin : unsigned char { L, S };

constexpr PhotonSpin flipped(PhotonSpin s) {
  return s == PhotonSpin::L ? PhotonSpin::S : PhotonSpin::L;
}
constexpr char to_char(PhotonSpin s) { return s == PhotonSpin::L ? 'L' : 'S'; }

/// Parses a string of 'L'/'S' characters; throws ArgumentError otherwise.
std::vector<PhotonSpin> parse_spins(const std::string& text);
std::string to_string(const std::vector<PhotonSpin>& spins);

/// Local vertex weights of one photon-atom crossing.
///
///   L on ground : stay L (stay)     or  -> S, atom excited   (convert)
///   L on excited: pass (1)
///   S on ground : pass (1)
///   S on excited: stay S (stay)     or  -> L, atom de-excited (convert)
///
/// With stay = b and convert = c these are the six-vertex weights
/// {1, b, c} of the photon (row) x atom (column) lattice.
struct VertexRules {
  Amplitude stay;
  Amplitude convert;

  static VertexRules from(const ModelParams& params) {
    return {params.b, params.c};
  }
};

/// Knobs for `sweep`. `max_conversions` < 0 keeps every path; a
/// nonnegative value drops paths that convert more often, which removes
/// the corresponding sub-channels (and breaks unitarity).
struct SweepOptions {
  double prune_eps = kDefaultPrune;
  int max_conversions = -1;
};

/// The two branches of one photon traversal. `elastic` is the medium state
/// in which the photon exits with its incoming spin, `inelastic` the
/// spin-flipped exit. Probabilities are the branch squared norms.
struct SweepResult {
  MediumState elastic;
  MediumState inelastic;
  double p_elastic = 0.0;
  double p_inelastic = 0.0;
};

/// Sends one photon through atoms 1..M in order (one row of the vertex
/// lattice). Throws ShapeError when the state and params disagree on M,
/// UndefinedError for the zero state.
SweepResult sweep(const MediumState& state, PhotonSpin spin,
                  const ModelParams& params, const SweepOptions& options = {});

/// Output medium state per exact number of conversions along the path,
/// index k = 0..max_conversions. Even k exit with the incoming spin.
std::vector<MediumState> sweep_subchannels(const MediumState& state,
                                           PhotonSpin spin,
                                           const ModelParams& params,
                                           int max_conversions,
                                           double prune_eps = kDefaultPrune);

/// phi_a = c b^(a-1): the one-excitation amplitudes left behind when the
/// first laser photon converts in an unexcited medium.
std::vector<Amplitude> first_photon_wavefunction(const ModelParams& params);

}  // namespace srs
