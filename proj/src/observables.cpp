#include "srs/observables.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"

namespace srs {

ScalingFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("fit abscissae and ordinates differ in length");
  }
  ScalingFit fit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      fit.excluded.push_back(
          fmt::format("point {} (x = {:.17g}, y = {:.17g}) is not positive", i,
                      x[i], y[i]));
      continue;
    }
    fit.abscissae.push_back(std::log(x[i]));
    fit.ordinates.push_back(std::log(y[i]));
  }
  const std::size_t n = fit.abscissae.size();
  if (n < 2) {
    throw UndefinedError(fmt::format(
        "log-log fit needs at least two positive points, got {}", n));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += fit.abscissae[i];
    my += fit.ordinates[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = fit.abscissae[i] - mx;
    sxx += dx * dx;
    sxy += dx * (fit.ordinates[i] - my);
  }
  if (sxx == 0.0) throw UndefinedError("log-log fit with identical abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r =
        fit.ordinates[i] - (fit.intercept + fit.slope * fit.abscissae[i]);
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return fit;
}

double oracle_pl1(const ModelParams& params) {
  return std::pow(params.p, params.m);
}

double oracle_pl2(const ModelParams& params) {
  if (params.m < 1) throw UndefinedError("second-photon oracle needs M >= 1");
  const double p = params.p;
  const double m = params.m;
  if (p == 1.0) return 1.0;
  const double s = std::norm(params.c);
  const double pm = std::pow(p, m);
  const double pm1 = std::pow(p, m - 1);
  // [4 + p] p^{M-1} (1 - p^M) + M s (M s - 4) p^{M-1}
  return pm * pm + (4.0 + p) * pm1 * (1.0 - pm) + m * s * (m * s - 4.0) * pm1;
}

RatioCheck oracle_ratio(const ModelParams& params) {
  RatioCheck out;
  out.ratio = oracle_pl2(params) / oracle_pl1(params);
  const double x = params.m * params.j * params.j;
  out.expansion = 1.0 - 2.0 * x * x;
  out.residual = std::abs(out.ratio - out.expansion);
  return out;
}

CooperativePoint cooperative_point(int m, double j) {
  const auto params = ModelParams::create(m, j);
  const std::vector<PhotonSpin> spins{PhotonSpin::L, PhotonSpin::L};
  const auto leaves =
      run_exact_tree(params, MediumState::all_ground(m), spins, TreeOptions{});
  const auto records = tree_records(leaves, spins, 0);
  return {m, records[0].p_inelastic, records[1].p_inelastic};
}

CooperativeScan cooperative_slope(std::span<const int> m_values, double j) {
  if (m_values.size() < 2) {
    throw UndefinedError("cooperative fit needs at least two atom counts");
  }
  CooperativeScan scan;
  std::vector<double> xs, ys;
  for (int m : m_values) {
    scan.points.push_back(cooperative_point(m, j));
    xs.push_back(m);
    ys.push_back(scan.points.back().difference());
  }
  scan.fit = fit_loglog(xs, ys);
  return scan;
}

DecayComparison oracle_decay(const ModelParams& params, double n_photons) {
  if (!params.gamma || !params.photon_flux) {
    throw ConfigError(
        "decay comparison needs both gamma and the photon flux rho");
  }
  DecayComparison out;
  out.amplitude = std::pow(std::cos(params.j), n_photons);
  out.elapsed = n_photons / *params.photon_flux;
  out.sf_value = std::exp(-0.5 * *params.gamma * out.elapsed);
  out.difference = std::abs(out.amplitude - out.sf_value);
  return out;
}

SfLimitStudy sf_limit_study(double gamma, double t,
                            std::span<const double> j_values) {
  SfLimitStudy study;
  std::vector<double> xs, ys;
  for (double j : j_values) {
    const auto params = ModelParams::create(1, j).with_decay_constant(gamma);
    const double n = t * *params.photon_flux;
    const auto cmp = oracle_decay(params, n);
    study.points.push_back({j, n, cmp.amplitude, cmp.difference});
    xs.push_back(j);
    ys.push_back(cmp.difference);
  }
  study.fit = fit_loglog(xs, ys);
  return study;
}

PulseMetrics pulse_metrics(std::span<const double> series,
                           std::span<const double> tolerance) {
  if (series.size() < 3) {
    throw UndefinedError(fmt::format(
        "pulse metrics need at least 3 points, got {}", series.size()));
  }
  if (tolerance.size() != 1 && tolerance.size() != series.size()) {
    throw ShapeError("tolerance must be a scalar or one value per point");
  }
  auto tol = [&](std::size_t i) {
    return tolerance.size() == 1 ? tolerance[0] : tolerance[i];
  };
  PulseMetrics out;
  out.series.assign(series.begin(), series.end());
  const auto peak = std::max_element(series.begin(), series.end());
  out.peak_index = static_cast<std::size_t>(peak - series.begin());
  out.peak_value = *peak;
  out.final_value = series.back();

  bool ok = true;
  for (std::size_t i = 1; i < series.size() && ok; ++i) {
    const double band = std::max(tol(i), tol(i - 1));
    if (i <= out.peak_index) {
      ok = series[i] >= series[i - 1] - band;
    } else {
      ok = series[i] <= series[i - 1] + band;
    }
  }
  out.unimodal = ok;
  const std::size_t last = series.size() - 1;
  const bool interior = out.peak_index > 0 && out.peak_index < last;
  out.is_pulse = ok && interior;
  out.truncated = ok && out.peak_index == last;
  return out;
}

PulseMetrics pulse_metrics(std::span<const double> series, double tolerance) {
  const double tol[1] = {tolerance};
  return pulse_metrics(series, std::span<const double>(tol));
}

}  // namespace srs
