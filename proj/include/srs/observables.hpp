#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srs/model_params.hpp"

namespace srs {

/// Ordinary least-squares line through (log x, log y).
struct ScalingFit {
  std::vector<double> abscissae;  // log x
  std::vector<double> ordinates;  // log y
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  /// Input points left out of the fit (nonpositive values), with reasons.
  std::vector<std::string> excluded;
};

/// Fits log y = slope log x + intercept. Points with nonpositive x or y are
/// reported in `excluded`; fewer than two usable points throws
/// UndefinedError.
ScalingFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Elastic probability of the first laser photon in an unexcited medium,
/// p^M.
double oracle_pl1(const ModelParams& params);

/// Closed form for the second photon's elastic probability,
///   p^{2M} + [4 + p + M|c|^2 (M|c|^2 - 4) / (1 - p^M)] p^{M-1} (1 - p^M),
/// with the removable 1 - p^M factor multiplied through.
double oracle_pl2(const ModelParams& params);

struct RatioCheck {
  double ratio = 1.0;      // P_L2 / P_L1
  double expansion = 1.0;  // 1 - 2 (M J^2)^2
  double residual = 0.0;   // |ratio - expansion|
};
RatioCheck oracle_ratio(const ModelParams& params);

struct CooperativePoint {
  int m = 0;
  double p_stokes_1 = 0.0;
  double p_stokes_2 = 0.0;
  double difference() const { return p_stokes_2 - p_stokes_1; }
};

/// First- and second-photon Stokes probabilities from the exact branch
/// tree (unexcited medium, two laser photons).
CooperativePoint cooperative_point(int m, double j);

struct CooperativeScan {
  std::vector<CooperativePoint> points;
  ScalingFit fit;
};

/// log(P_S2 - P_S1) against log M. Throws UndefinedError when fewer than
/// two differences are positive.
CooperativeScan cooperative_slope(std::span<const int> m_values, double j);

struct DecayComparison {
  double amplitude = 1.0;  // (cos J)^N
  double elapsed = 0.0;    // t = N / rho
  double sf_value = 1.0;   // exp(-gamma t / 2)
  double difference = 0.0;
};

/// Survival amplitude of one excited atom after N Stokes photons and its
/// exponential-decay counterpart. Needs gamma and photon_flux in params.
DecayComparison oracle_decay(const ModelParams& params, double n_photons);

struct SfLimitPoint {
  double j = 0.0;
  double n_photons = 0.0;  // gamma t / J^2
  double amplitude = 0.0;
  double difference = 0.0;
};

struct SfLimitStudy {
  std::vector<SfLimitPoint> points;
  ScalingFit fit;  // log |difference| vs log J
};

/// Holds gamma and t fixed while J shrinks (photon flux = gamma / J^2).
SfLimitStudy sf_limit_study(double gamma, double t,
                            std::span<const double> j_values);

struct PulseMetrics {
  std::vector<double> series;
  std::size_t peak_index = 0;
  double peak_value = 0.0;
  double final_value = 0.0;
  bool unimodal = false;
  /// Interior peak with a unimodal shape.
  bool is_pulse = false;
  /// Unimodal but still rising at the last point.
  bool truncated = false;
};

/// Shape metrics of a Stokes-probability series. `tolerance` is the band
/// within which a step against the expected direction is ignored: one value
/// for all points, or one per point (e.g. 2 sigma for Monte Carlo).
PulseMetrics pulse_metrics(std::span<const double> series,
                           std::span<const double> tolerance);
PulseMetrics pulse_metrics(std::span<const double> series,
                           double tolerance = 1e-10);

}  // namespace srs
