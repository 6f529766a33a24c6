#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmr/error.hpp"
#include "mmr/manifold.hpp"
#include "mmr/mask.hpp"
#include "mmr/parallel.hpp"

namespace mmr {

/// One period of a periodic manifold-valued sequence.
template <Manifold M>
using ManifoldSequence = std::vector<typename M::Point>;

/// {c⁽⁰⁾; d⁽¹⁾ … d⁽ᴶ⁾}, details ordered coarse to fine. Each detail carries
/// the prediction point it was computed at.
template <Manifold M>
struct ManifoldPyramid {
  ManifoldSequence<M> coarse;
  std::vector<std::vector<TangentVector<M>>> details;

  int levels() const { return static_cast<int>(details.size()); }
};

namespace detail {

inline std::size_t wrap(long long k, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

inline Error at(const Error& e, const std::string& where, std::size_t index) {
  return e.with_context(where + " index " + std::to_string(index));
}

/// Weighted mean of c_i with weights merged over periodic duplicates.
template <Manifold M>
typename M::Point periodic_mean(const M& m, const ManifoldSequence<M>& c, const std::map<std::size_t, double>& terms,
                                const MeanOptions& opts) {
  std::vector<typename M::Point> pts;
  std::vector<double> w;
  pts.reserve(terms.size());
  w.reserve(terms.size());
  for (const auto& [i, wi] : terms) {
    pts.push_back(c[i]);
    w.push_back(wi);
  }
  return weighted_mean(m, std::span<const typename M::Point>(pts), std::span<const double>(w), opts).point;
}

}  // namespace detail

/// (T_α c)_k = argmin Σ_i α_{k-2i} ρ(x, c_i)², output twice as long.
template <Manifold M>
ManifoldSequence<M> t_subdivide(const M& m, const Mask& alpha, const ManifoldSequence<M>& c, const MeanOptions& opts = {}) {
  if (c.empty()) throw Error(ErrorCode::ShapeMismatch, "cannot subdivide an empty sequence");
  const std::size_t n = c.size();
  ManifoldSequence<M> out(2 * n);
  parallel_for(2 * n, [&](std::size_t k) {
    std::map<std::size_t, double> terms;
    // k - 2i in [first, last]
    const long long kk = static_cast<long long>(k);
    for (int j = alpha.first_index(); j <= alpha.last_index(); ++j) {
      if ((kk - j) % 2 != 0 || alpha[j] == 0.0) continue;
      terms[detail::wrap((kk - j) / 2, n)] += alpha[j];
    }
    try {
      out[k] = detail::periodic_mean(m, c, terms, opts);
    } catch (const Error& e) {
      throw detail::at(e, "subdivision", k);
    }
  });
  return out;
}

/// (Y_ζ c)_k = argmin Σ_i ζ_{k-i} ρ(x, c_2i)², output half as long.
template <Manifold M>
ManifoldSequence<M> y_decimate(const M& m, const Mask& zeta, const ManifoldSequence<M>& c, const MeanOptions& opts = {}) {
  if (c.empty() || c.size() % 2 != 0) {
    throw Error(ErrorCode::ShapeMismatch, "decimation needs an even, nonzero length, got " + std::to_string(c.size()));
  }
  const std::size_t n = c.size() / 2;
  ManifoldSequence<M> even(n);
  for (std::size_t i = 0; i < n; ++i) even[i] = c[2 * i];
  ManifoldSequence<M> out(n);
  parallel_for(n, [&](std::size_t k) {
    std::map<std::size_t, double> terms;
    for (int j = zeta.first_index(); j <= zeta.last_index(); ++j) {
      if (zeta[j] == 0.0) continue;
      terms[detail::wrap(static_cast<long long>(k) - j, n)] += zeta[j];
    }
    try {
      out[k] = detail::periodic_mean(m, even, terms, opts);
    } catch (const Error& e) {
      throw detail::at(e, "decimation", k);
    }
  });
  return out;
}

/// c⁽ℓ⁻¹⁾ = Y_ζ c⁽ℓ⁾, d⁽ℓ⁾_k = log((T_α c⁽ℓ⁻¹⁾)_k, c⁽ℓ⁾_k) for ℓ = J … 1.
template <Manifold M>
ManifoldPyramid<M> m_analyze(const M& m, const Mask& alpha, const Mask& zeta, const ManifoldSequence<M>& fine, int levels,
                             const MeanOptions& opts = {}) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be nonnegative");
  const std::size_t block = std::size_t{1} << levels;
  if (fine.empty() || fine.size() % block != 0) {
    throw Error(ErrorCode::ShapeMismatch,
                "length " + std::to_string(fine.size()) + " is not divisible by 2^" + std::to_string(levels));
  }
  for (std::size_t k = 0; k < fine.size(); ++k) {
    try {
      m.validate(fine[k]);
    } catch (const Error& e) {
      throw detail::at(e, "input", k);
    }
  }
  ManifoldPyramid<M> p;
  p.details.resize(static_cast<std::size_t>(levels));
  ManifoldSequence<M> c = fine;
  for (int l = levels; l >= 1; --l) {
    const std::string where = "level " + std::to_string(l);
    try {
      ManifoldSequence<M> coarser = y_decimate(m, zeta, c, opts);
      ManifoldSequence<M> pred = t_subdivide(m, alpha, coarser, opts);
      auto& layer = p.details[static_cast<std::size_t>(l - 1)];
      layer.resize(c.size());
      parallel_for(c.size(), [&](std::size_t k) {
        try {
          layer[k] = {pred[k], m.log(pred[k], c[k])};
        } catch (const Error& e) {
          throw detail::at(e, "detail", k);
        }
      });
      c = std::move(coarser);
    } catch (const Error& e) {
      throw e.with_context(where);
    }
  }
  p.coarse = std::move(c);
  return p;
}

/// c⁽ℓ⁾_k = exp((T_α c⁽ℓ⁻¹⁾)_k, d⁽ℓ⁾_k). Details are transported from their
/// stored base to the recomputed prediction first.
template <Manifold M>
ManifoldSequence<M> m_synthesize(const M& m, const Mask& alpha, const ManifoldPyramid<M>& pyramid,
                                 const MeanOptions& opts = {}) {
  ManifoldSequence<M> c = pyramid.coarse;
  for (std::size_t l = 0; l < pyramid.details.size(); ++l) {
    const auto& layer = pyramid.details[l];
    const std::string where = "level " + std::to_string(l + 1);
    if (layer.size() != 2 * c.size()) {
      throw Error(ErrorCode::ShapeMismatch, where + ": detail layer has length " + std::to_string(layer.size()) +
                                                ", expected " + std::to_string(2 * c.size()));
    }
    try {
      ManifoldSequence<M> pred = t_subdivide(m, alpha, c, opts);
      ManifoldSequence<M> next(pred.size());
      parallel_for(pred.size(), [&](std::size_t k) {
        try {
          const auto v = m.transport(layer[k].vec, layer[k].base, pred[k]);
          const double nv = m.norm(pred[k], v);
          if (!(nv < m.injectivity_radius())) {
            throw Error(ErrorCode::BeyondInjectivity, "detail norm " + std::to_string(nv) + " exceeds injectivity radius");
          }
          next[k] = m.exp(pred[k], v);
        } catch (const Error& e) {
          throw detail::at(e, "detail", k);
        }
      });
      c = std::move(next);
    } catch (const Error& e) {
      throw e.with_context(where);
    }
  }
  return c;
}

/// Max geodesic distance between consecutive elements, wrapping around.
template <Manifold M>
double delta_m(const M& m, const ManifoldSequence<M>& c) {
  double d = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) d = std::max(d, m.distance(c[k], c[(k + 1) % c.size()]));
  return d;
}

/// Max pointwise geodesic distance.
template <Manifold M>
double mu(const M& m, const ManifoldSequence<M>& a, const ManifoldSequence<M>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "sequences differ in length");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, m.distance(a[k], b[k]));
  return d;
}

template <Manifold M>
ManifoldSequence<M> downsample(const ManifoldSequence<M>& c) {
  ManifoldSequence<M> out;
  out.reserve(c.size() / 2);
  for (std::size_t k = 0; k < c.size(); k += 2) out.push_back(c[k]);
  return out;
}

/// max_k ‖d_k‖ over one layer.
template <Manifold M>
double layer_max(const M& m, const std::vector<TangentVector<M>>& layer) {
  double r = 0.0;
  for (const auto& d : layer) r = std::max(r, m.norm(d.base, d.vec));
  return r;
}

/// Observed safety ratios of (T_α, Y_ζ) on one sequence.
struct SafetyConstants {
  double e_t = 0.0;
  double f_y = 0.0;
  double q_obs = 0.0;
  double s_t_est = 0.0;
  /// Δ_M(c) = 0; all ratios are reported as 0.
  bool degenerate = false;

  /// Detail bound constant 1 + 2E + Q + S F.
  double k() const { return 1.0 + 2.0 * e_t + q_obs + s_t_est * f_y; }
  /// Contraction constant 1 + F.
  double p() const { return 1.0 + f_y; }
};

struct SafetyOptions {
  int trials = 8;
  /// Perturbation size relative to Δ_M(c).
  double magnitude = 0.05;
  std::uint64_t seed = 1;
  MeanOptions mean;
};

/// E_T = μ(c, (T c)↓2)/Δ, F_Y = μ(Y c, c↓2)/Δ, Q = Δ(T c)/Δ and S_T as the
/// largest μ(T c, T c̃)/μ(c, c̃) over random perturbations c̃ of c.
template <Manifold M>
SafetyConstants safety_constants(const M& m, const Mask& alpha, const Mask& zeta, const ManifoldSequence<M>& c,
                                 const SafetyOptions& opts = {}) {
  SafetyConstants s;
  const double dc = delta_m(m, c);
  if (dc == 0.0) {
    s.degenerate = true;
    return s;
  }
  const ManifoldSequence<M> tc = t_subdivide(m, alpha, c, opts.mean);
  s.e_t = mu(m, c, downsample<M>(tc)) / dc;
  s.f_y = mu(m, y_decimate(m, zeta, c, opts.mean), downsample<M>(c)) / dc;
  s.q_obs = delta_m(m, tc) / dc;

  Rng rng(opts.seed);
  for (int t = 0; t < opts.trials; ++t) {
    ManifoldSequence<M> ct(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      auto v = m.random_tangent(c[k], rng);
      const double nv = m.norm(c[k], v);
      if (nv > 0.0) v *= opts.magnitude * dc / nv;
      ct[k] = m.exp(c[k], v);
    }
    const double den = mu(m, c, ct);
    if (den == 0.0) continue;
    s.s_t_est = std::max(s.s_t_est, mu(m, tc, t_subdivide(m, alpha, ct, opts.mean)) / den);
  }
  return s;
}

}  // namespace mmr
