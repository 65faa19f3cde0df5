#include "srs/model_params.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "srs/errors.hpp"

namespace srs {

ModelParams ModelParams::create(int m, double j) {
  check_atom_count(m);
  if (!(j >= 0.0 && j <= std::numbers::pi / 2)) {
    throw ConfigError(fmt::format("coupling J = {} outside [0, pi/2]", j));
  }
  ModelParams params;
  params.m = m;
  params.j = j;
  params.b = Amplitude{std::cos(j), 0.0};
  params.c = Amplitude{0.0, std::sin(j)};
  params.p = std::norm(params.b);
  return params;
}

ModelParams ModelParams::with_decay_constant(double g) const {
  if (!(g > 0.0)) throw ConfigError("decay constant gamma must be positive");
  if (j == 0.0) {
    throw ConfigError("a finite decay constant needs a nonzero coupling");
  }
  ModelParams out = *this;
  out.gamma = g;
  out.photon_flux = g / (j * j);
  return out;
}

ModelParams ModelParams::with_photon_flux(double flux) const {
  if (!(flux > 0.0)) throw ConfigError("photon flux must be positive");
  ModelParams out = *this;
  out.photon_flux = flux;
  out.gamma = j * j * flux;
  return out;
}

ModelParams ModelParams::with_length(double l) const {
  if (!(l > 0.0)) throw ConfigError("medium length must be positive");
  ModelParams out = *this;
  out.length = l;
  out.atom_density = m / l;
  return out;
}

void ModelParams::validate() const {
  if (m < 0 || m > kMaxAtoms) {
    throw ConfigError(fmt::format("atom count {} out of range", m));
  }
  if (!(j >= 0.0 && j <= std::numbers::pi / 2)) {
    throw ConfigError(fmt::format("coupling J = {} outside [0, pi/2]", j));
  }
  if (std::abs(std::norm(b) + std::norm(c) - 1.0) > 1e-15) {
    throw ConfigError("|b|^2 + |c|^2 != 1");
  }
  if (gamma && photon_flux &&
      std::abs(*gamma - j * j * *photon_flux) > 1e-12 * std::max(1.0, *gamma)) {
    throw ConfigError("gamma != J^2 * photon_flux");
  }
}

}  // namespace srs
