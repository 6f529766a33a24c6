#include "mmr/linear_pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmr/error.hpp"

namespace mmr {

namespace {

std::size_t wrap(long long k, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

}  // namespace

Sequence subdivide(const Mask& alpha, std::span<const double> c) {
  if (c.empty()) throw Error(ErrorCode::ShapeMismatch, "cannot subdivide an empty sequence");
  const std::size_t n = c.size();
  Sequence out(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = alpha.first_index(); j <= alpha.last_index(); ++j) {
      out[wrap(2 * static_cast<long long>(i) + j, 2 * n)] += alpha[j] * c[i];
    }
  }
  return out;
}

Sequence decimate(const Mask& gamma, std::span<const double> c) {
  if (c.empty() || c.size() % 2 != 0) {
    throw Error(ErrorCode::ShapeMismatch, "decimation needs an even, nonzero length, got " + std::to_string(c.size()));
  }
  const std::size_t n = c.size() / 2;
  Sequence out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = gamma.first_index(); j <= gamma.last_index(); ++j) {
      acc += gamma[j] * c[2 * wrap(static_cast<long long>(k) - j, n)];
    }
    out[k] = acc;
  }
  return out;
}

LinearPyramid analyze(const Mask& alpha, const Mask& decimation, std::span<const double> fine, int levels) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be nonnegative");
  const std::size_t block = std::size_t{1} << levels;
  if (fine.empty() || fine.size() % block != 0) {
    throw Error(ErrorCode::ShapeMismatch,
                "length " + std::to_string(fine.size()) + " is not divisible by 2^" + std::to_string(levels));
  }
  LinearPyramid p;
  p.details.resize(static_cast<std::size_t>(levels));
  Sequence c(fine.begin(), fine.end());
  for (int l = levels; l >= 1; --l) {
    Sequence coarser = decimate(decimation, c);
    Sequence pred = subdivide(alpha, coarser);
    for (std::size_t k = 0; k < c.size(); ++k) pred[k] = c[k] - pred[k];
    p.details[static_cast<std::size_t>(l - 1)] = std::move(pred);
    c = std::move(coarser);
  }
  p.coarse = std::move(c);
  return p;
}

Sequence synthesize(const Mask& alpha, const LinearPyramid& pyramid) {
  Sequence c = pyramid.coarse;
  for (std::size_t l = 0; l < pyramid.details.size(); ++l) {
    const Sequence& d = pyramid.details[l];
    if (d.size() != 2 * c.size()) {
      throw Error(ErrorCode::ShapeMismatch, "detail layer " + std::to_string(l + 1) + " has length " +
                                                std::to_string(d.size()) + ", expected " + std::to_string(2 * c.size()));
    }
    Sequence next = subdivide(alpha, c);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] += d[k];
    c = std::move(next);
  }
  return c;
}

double delta(std::span<const double> c) {
  double m = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) m = std::max(m, std::abs(c[(k + 1) % c.size()] - c[k]));
  return m;
}

double sup_norm(std::span<const double> c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

BoundConstants bound_constants(const Mask& alpha, const Mask& decimation, double eta) {
  const MaskConstants a = mask_constants(alpha);
  const MaskConstants g = mask_constants(decimation);
  BoundConstants b;
  b.k_alpha = a.moment;
  b.k_decimation = 2.0 * g.moment;
  b.m = g.l1_norm;
  b.k_combined = b.k_decimation * a.l1_norm + b.m * b.k_alpha;
  b.floor_coefficient = eta * a.l1_norm;
  return b;
}

}  // namespace mmr
