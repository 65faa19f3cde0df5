#pragma once

#include <optional>

#include "srs/medium_state.hpp"

namespace srs {

/// Coupling and medium size, with the scattering amplitudes derived from
/// them: b = cos J (elastic), c = i sin J (conversion), p = b^2.
///
/// The optional superfluorescence-limit quantities are linked by
/// gamma = J^2 * photon_flux; setting one through the `with_*` helpers fills
/// in the other. `atom_density` = m / length maps atom index to coordinate.
struct ModelParams {
  int m = 0;
  double j = 0.0;
  Amplitude b{1.0, 0.0};
  Amplitude c{0.0, 0.0};
  double p = 1.0;

  std::optional<double> gamma;
  std::optional<double> photon_flux;
  std::optional<double> atom_density;
  std::optional<double> length;

  /// Validates 0 <= m <= kMaxAtoms and 0 <= j <= pi/2.
  static ModelParams create(int m, double j);

  ModelParams with_decay_constant(double gamma) const;
  ModelParams with_photon_flux(double flux) const;
  ModelParams with_length(double length) const;

  /// sin^2 J, i.e. |c|^2.
  double conversion_probability() const { return std::norm(c); }

  /// Re-checks every invariant; throws ConfigError on violation.
  void validate() const;
};

}  // namespace srs
