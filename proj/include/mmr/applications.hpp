#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmr/linear_pyramid.hpp"
#include "mmr/manifold.hpp"
#include "mmr/manifold_pyramid.hpp"

namespace mmr {

// ------------------------------------------------------------------ curves

/// Samples of the spherical flower θ ↦ (sin φ cos θ, sin φ sin θ, cos φ),
/// φ(θ) = π/16 cos(Nθ) + π/6, at θ_k = 2πk/samples.
ManifoldSequence<Sphere> flower_curve(int leaves, int samples);

struct SpdAnomaly {
  double scale = 2.0;
};

/// Smooth closed SPD(3) path P(θ) = R(θ) diag(λ(θ)) R(θ)ᵀ with
/// λ_i(θ) = a_i + b_i cos(2θ + φ_i) and R(θ) the rotation by θ about a fixed
/// axis, sampled at θ_k = 2πk/samples. With an anomaly, the eigenvalues of
/// samples k in [samples/3, 2 samples/3) are multiplied by its scale.
ManifoldSequence<Spd3> spd_curve(int samples, std::optional<SpdAnomaly> anomaly = std::nullopt);

/// First and one-past-last index of the anomalous window.
std::pair<int, int> spd_anomaly_window(int samples);

/// sin(3x) at x_k = 2πk/samples.
Sequence sine_samples(int samples);

// ------------------------------------------------------------------- noise

struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

template <Manifold M>
struct NoisySequence {
  ManifoldSequence<M> points;
  /// Draws whose norm reached the injectivity radius and were shrunk.
  int rescaled = 0;
};

/// Υ_k = exp(Γ_k, σ χ_k), χ_k standard isotropic Gaussian in T_{Γ_k}.
template <Manifold M>
NoisySequence<M> add_noise(const M& m, const ManifoldSequence<M>& c, const NoiseModel& model) {
  if (!(model.sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
  NoisySequence<M> out;
  out.points = c;
  if (model.sigma == 0.0) return out;
  Rng rng(model.seed);
  const double inj = m.injectivity_radius();
  for (std::size_t k = 0; k < c.size(); ++k) {
    auto v = m.random_tangent(c[k], rng);
    v *= model.sigma;
    const double nv = m.norm(c[k], v);
    if (nv >= inj) {
      v *= 0.99 * inj / nv;
      ++out.rescaled;
    }
    out.points[k] = m.exp(c[k], v);
  }
  return out;
}

/// Mean pointwise geodesic distance.
template <Manifold M>
double mean_distance(const M& m, const ManifoldSequence<M>& a, const ManifoldSequence<M>& b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::ShapeMismatch, "sequences differ in length");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += m.distance(a[k], b[k]);
  return s / static_cast<double>(a.size());
}

// --------------------------------------------------------------- denoising

/// Zeroes every detail with norm below tau and synthesizes.
template <Manifold M>
ManifoldPyramid<M> threshold_pyramid(const M& m, ManifoldPyramid<M> pyramid, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be nonnegative");
  for (auto& layer : pyramid.details) {
    for (auto& d : layer) {
      if (m.norm(d.base, d.vec) < tau) d.vec = m.zero(d.base);
    }
  }
  return pyramid;
}

template <Manifold M>
ManifoldSequence<M> threshold_denoise(const M& m, const Mask& alpha, const ManifoldPyramid<M>& pyramid, double tau,
                                      const MeanOptions& opts = {}) {
  return m_synthesize(m, alpha, threshold_pyramid(m, pyramid, tau), opts);
}

// --------------------------------------------------------------- anomalies

struct AnomalyPolicy {
  /// Flag norms above median + z·MAD of their level.
  double z = 6.0;
  /// Never flag norms at or below this.
  double min_norm = 1e-8;
};

struct Anomaly {
  int level = 0;
  int index = 0;
  double norm = 0.0;
  /// Dyadic grid position index·2^-level.
  double position = 0.0;
  /// The same position on the finest grid, index·2^(J-level).
  long long fine_index = 0;
};

double median(std::vector<double> v);

/// Flags per level, sorted by level then index.
std::vector<Anomaly> flag_outliers(const std::vector<std::vector<double>>& layer_norms, const AnomalyPolicy& policy);

template <Manifold M>
std::vector<std::vector<double>> detail_norms(const M& m, const ManifoldPyramid<M>& pyramid) {
  std::vector<std::vector<double>> out;
  for (const auto& layer : pyramid.details) {
    auto& row = out.emplace_back();
    row.reserve(layer.size());
    for (const auto& d : layer) row.push_back(m.norm(d.base, d.vec));
  }
  return out;
}

template <Manifold M>
std::vector<Anomaly> detect_anomalies(const M& m, const ManifoldPyramid<M>& pyramid, const AnomalyPolicy& policy = {}) {
  return flag_outliers(detail_norms(m, pyramid), policy);
}

// ------------------------------------------------------------ decay report

/// Least-squares fit of log2(values[i]) against i; returns 2^slope, the
/// per-step geometric ratio. Zero entries are skipped.
double fitted_ratio(const std::vector<double>& values);

struct DecayReport {
  std::vector<double> per_level_max;
  double fitted_ratio = 0.0;
  /// Δ_M(c) and P_min = Δ_M(Y c)/(2Δ_M(c)) for each decimation step,
  /// finest first.
  std::vector<double> deltas;
  std::vector<double> p_min;
  /// Largest detail at the finest level.
  double floor_estimate = 0.0;
  bool degenerate = false;
};

/// P_min along the successive decimations of `curve`, plus detail decay of
/// its pyramid.
template <Manifold M>
DecayReport p_min_report(const M& m, const Mask& alpha, const Mask& zeta, const ManifoldSequence<M>& curve, int levels,
                         const MeanOptions& opts = {}) {
  DecayReport r;
  const ManifoldPyramid<M> p = m_analyze(m, alpha, zeta, curve, levels, opts);
  for (const auto& layer : p.details) r.per_level_max.push_back(layer_max(m, layer));
  r.fitted_ratio = fitted_ratio(r.per_level_max);
  if (!r.per_level_max.empty()) r.floor_estimate = r.per_level_max.back();
  ManifoldSequence<M> c = curve;
  for (int l = 0; l < levels; ++l) {
    const double d = delta_m(m, c);
    ManifoldSequence<M> y = y_decimate(m, zeta, c, opts);
    if (d == 0.0) {
      r.degenerate = true;
      break;
    }
    r.deltas.push_back(d);
    r.p_min.push_back(delta_m(m, y) / (2.0 * d));
    c = std::move(y);
  }
  return r;
}

struct PminRow {
  int samples = 0;
  double delta = 0.0;
  double p_min = 0.0;
};

/// P_min for independent samplings of a curve at each requested count.
template <Manifold M>
std::vector<PminRow> p_min_table(const M& m, const Mask& zeta, const std::function<ManifoldSequence<M>(int)>& curve,
                                 const std::vector<int>& sample_counts, const MeanOptions& opts = {}) {
  std::vector<PminRow> rows;
  for (int n : sample_counts) {
    const ManifoldSequence<M> c = curve(n);
    const double d = delta_m(m, c);
    if (d == 0.0) throw Error(ErrorCode::InvalidArgument, "constant curve has no P_min");
    rows.push_back({n, d, delta_m(m, y_decimate(m, zeta, c, opts)) / (2.0 * d)});
  }
  return rows;
}

/// max_k |d_k| per level of a linear pyramid.
std::vector<double> per_level_max(const LinearPyramid& p);

}  // namespace mmr
