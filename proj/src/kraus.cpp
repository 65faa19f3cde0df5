#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srs/errors.hpp"
#include "srs/evolution.hpp"

namespace srs {

namespace {

std::size_t index_of(const std::vector<Mask>& masks, Mask mask) {
  auto it = std::lower_bound(masks.begin(), masks.end(), mask);
  return static_cast<std::size_t>(it - masks.begin());
}

int inelastic_sector(int k, PhotonSpin spin) {
  return spin == PhotonSpin::L ? k + 1 : k - 1;
}

// Medium states that are real up to one global phase keep every block
// real: A is a real matrix and C is i times a real matrix.
bool has_real_structure(const MediumState& state) {
  const auto entries = state.entries();
  const Amplitude phase = entries.front().amplitude /
                          std::abs(entries.front().amplitude);
  return std::all_of(entries.begin(), entries.end(), [&](const auto& e) {
    return (e.amplitude * std::conj(phase)).imag() == 0.0;
  });
}

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct SectorOps {
  Matrix<Scalar> elastic;
  Matrix<Scalar> inelastic;
};

template <typename Scalar>
SectorOps<Scalar> convert_ops(const ModelParams& params, int k,
                              PhotonSpin spin) {
  auto [a, c] = sector_operators(params, k, spin);
  if constexpr (std::is_same_v<Scalar, double>) {
    // Drop the global factor i of the conversion operator; it cancels in
    // C rho C^dagger.
    return {a.real(), c.imag()};
  } else {
    return {std::move(a), std::move(c)};
  }
}

template <typename Scalar>
KrausResult evolve(const ModelParams& params, const MediumState& initial,
                   std::span<const PhotonSpin> spins_in) {
  const int m = params.m;
  std::map<int, Matrix<Scalar>> blocks;
  {
    const auto masks = sector_masks(m, initial.sector());
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(
        static_cast<Eigen::Index>(masks.size()));
    const Amplitude phase = initial.entries().front().amplitude /
                            std::abs(initial.entries().front().amplitude);
    for (const auto& e : initial.entries()) {
      psi(static_cast<Eigen::Index>(index_of(masks, e.mask))) =
          e.amplitude * std::conj(phase);
    }
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    if constexpr (std::is_same_v<Scalar, double>) {
      blocks[initial.sector()] = rho.real();
    } else {
      blocks[initial.sector()] = rho;
    }
  }

  // Operators are reused across photons while they fit the cache budget.
  constexpr std::size_t kCacheScalars = std::size_t{1} << 25;
  std::size_t cached = 0;
  std::map<std::pair<int, PhotonSpin>, SectorOps<Scalar>> cache;

  KrausResult result;
  result.photons.reserve(spins_in.size());
  for (const PhotonSpin spin : spins_in) {
    PhotonRecord rec;
    rec.spin_in = spin;
    std::map<int, Matrix<Scalar>> next;
    for (const auto& [k, rho] : blocks) {
      SectorOps<Scalar> local;
      const SectorOps<Scalar>* ops = nullptr;
      auto it = cache.find({k, spin});
      if (it != cache.end()) {
        ops = &it->second;
      } else {
        local = convert_ops<Scalar>(params, k, spin);
        const std::size_t size =
            static_cast<std::size_t>(local.elastic.size() + local.inelastic.size());
        if (cached + size <= kCacheScalars) {
          cached += size;
          ops = &cache.emplace(std::pair{k, spin}, std::move(local))
                     .first->second;
        } else {
          ops = &local;
        }
      }

      Matrix<Scalar> tmp = ops->elastic * rho;
      Matrix<Scalar> el = tmp * ops->elastic.adjoint();
      rec.p_elastic += std::real(el.trace());
      if (auto found = next.find(k); found != next.end()) {
        found->second += el;
      } else {
        next.emplace(k, std::move(el));
      }

      if (ops->inelastic.rows() > 0) {
        tmp = ops->inelastic * rho;
        Matrix<Scalar> in = tmp * ops->inelastic.adjoint();
        rec.p_inelastic += std::real(in.trace());
        const int target = inelastic_sector(k, spin);
        if (auto found = next.find(target); found != next.end()) {
          found->second += in;
        } else {
          next.emplace(target, std::move(in));
        }
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.size() == 0; });
    blocks = std::move(next);

    double total = 0.0, mean = 0.0;
    for (const auto& [k, rho] : blocks) {
      const double w = std::real(rho.trace());
      total += w;
      mean += k * w;
    }
    rec.mean_excitation = total > 0.0 ? mean / total : 0.0;
    for (const auto& [k, rho] : blocks) {
      const double q = std::real(rho.trace()) / total;
      if (q > 0.0) rec.sector_entropy -= q * std::log(q);
    }
    result.photons.push_back(rec);
  }

  result.final_state = SectorMixture(m);
  for (auto& [k, rho] : blocks) {
    result.final_state.blocks().emplace(k, rho.template cast<Amplitude>());
  }
  return result;
}

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sector_operators(
    const ModelParams& params, int k, PhotonSpin spin) {
  const int m = params.m;
  const auto source = sector_masks(m, k);
  const int k_out = inelastic_sector(k, spin);
  const auto target = sector_masks(m, k_out);
  const auto d_in = static_cast<Eigen::Index>(source.size());
  Eigen::MatrixXcd elastic = Eigen::MatrixXcd::Zero(d_in, d_in);
  Eigen::MatrixXcd inelastic =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(target.size()), d_in);
  const SweepOptions exact{0.0, -1};
  for (Eigen::Index col = 0; col < d_in; ++col) {
    const auto basis = MediumState::basis(
        m, BasisConfig{source[static_cast<std::size_t>(col)]});
    const SweepResult r = sweep(basis, spin, params, exact);
    for (const auto& e : r.elastic.entries()) {
      elastic(static_cast<Eigen::Index>(index_of(source, e.mask)), col) =
          e.amplitude;
    }
    for (const auto& e : r.inelastic.entries()) {
      inelastic(static_cast<Eigen::Index>(index_of(target, e.mask)), col) =
          e.amplitude;
    }
  }
  return {std::move(elastic), std::move(inelastic)};
}

KrausResult run_kraus(const ModelParams& params, const MediumState& initial,
                      std::span<const PhotonSpin> spins_in,
                      const KrausOptions& options) {
  if (initial.atoms() != params.m) {
    throw ShapeError(fmt::format("state has {} atoms but params have {}",
                                 initial.atoms(), params.m));
  }
  if (initial.empty()) throw UndefinedError("Kraus evolution of the zero state");
  if (params.m > options.max_atoms && !options.allow_large) {
    const double largest = sector_dimension(params.m, params.m / 2);
    throw ResourceError(fmt::format(
        "exact mixed-state evolution is capped at {} atoms (requested {}, "
        "largest block {:.0f}^2 = {:.1f} MB); use Monte Carlo mode or "
        "override the cap",
        options.max_atoms, params.m, largest,
        largest * largest * 16.0 / 1e6));
  }
  const bool real = params.b.imag() == 0.0 && params.c.real() == 0.0 &&
                    has_real_structure(initial);
  return real ? evolve<double>(params, initial, spins_in)
              : evolve<Amplitude>(params, initial, spins_in);
}

SectorMixture SectorMixture::pure(const MediumState& state) {
  SectorMixture mix(state.atoms());
  const auto masks = sector_masks(state.atoms(), state.sector());
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(masks.size()));
  for (const auto& e : state.entries()) {
    psi(static_cast<Eigen::Index>(index_of(masks, e.mask))) = e.amplitude;
  }
  mix.blocks_.emplace(state.sector(), psi * psi.adjoint());
  return mix;
}

double SectorMixture::trace() const {
  double t = 0.0;
  for (const auto& [k, rho] : blocks_) t += rho.trace().real();
  return t;
}

std::map<int, double> SectorMixture::weights() const {
  std::map<int, double> w;
  for (const auto& [k, rho] : blocks_) w[k] = rho.trace().real();
  return w;
}

double SectorMixture::mean_excitation() const {
  double total = 0.0, mean = 0.0;
  for (const auto& [k, rho] : blocks_) {
    const double w = rho.trace().real();
    total += w;
    mean += k * w;
  }
  if (total <= 0.0) throw UndefinedError("mean excitation of a zero mixture");
  return mean / total;
}

double SectorMixture::sector_entropy() const {
  const double total = trace();
  if (total <= 0.0) throw UndefinedError("sector entropy of a zero mixture");
  double h = 0.0;
  for (const auto& [k, rho] : blocks_) {
    const double q = rho.trace().real() / total;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

std::vector<double> SectorMixture::excitation_profile() const {
  const double total = trace();
  if (total <= 0.0) {
    throw UndefinedError("excitation profile of a zero mixture");
  }
  std::vector<double> profile(static_cast<std::size_t>(m_), 0.0);
  for (const auto& [k, rho] : blocks_) {
    const auto masks = sector_masks(m_, k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      const double w = rho(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(i)).real();
      for (Mask bits = masks[i]; bits != 0; bits &= bits - 1) {
        profile[static_cast<std::size_t>(std::countr_zero(bits))] += w;
      }
    }
  }
  for (auto& v : profile) v /= total;
  return profile;
}

}  // namespace srs
