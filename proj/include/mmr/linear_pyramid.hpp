#pragma once

#include <span>
#include <vector>

#include "mmr/mask.hpp"

namespace mmr {

/// One period of a periodic real sequence.
using Sequence = std::vector<double>;

/// {c⁽⁰⁾; d⁽¹⁾ … d⁽ᴶ⁾}, details ordered coarse to fine.
struct LinearPyramid {
  Sequence coarse;
  std::vector<Sequence> details;

  int levels() const { return static_cast<int>(details.size()); }
};

/// (S_α c)_k = Σ_i α_{k-2i} c_i, output twice as long.
Sequence subdivide(const Mask& alpha, std::span<const double> c);

/// (D_γ c)_k = Σ_i γ_{k-i} c_{2i}, output half as long. Rejects odd lengths.
Sequence decimate(const Mask& gamma, std::span<const double> c);

/// c⁽ℓ⁻¹⁾ = D c⁽ℓ⁾, d⁽ℓ⁾ = c⁽ℓ⁾ - S_α c⁽ℓ⁻¹⁾ for ℓ = J … 1.
///
/// The decimation mask picks the transform: δ gives the interpolating
/// transform, a truncated γ̃ the truncated one, ζ the normalized one.
LinearPyramid analyze(const Mask& alpha, const Mask& decimation, std::span<const double> fine, int levels);

/// c⁽ℓ⁾ = S_α c⁽ℓ⁻¹⁾ + d⁽ℓ⁾.
Sequence synthesize(const Mask& alpha, const LinearPyramid& pyramid);

/// Max over one period of |c_{k+1} - c_k|, wrapping around.
double delta(std::span<const double> c);
double sup_norm(std::span<const double> c);

/// Constants of the detail bounds
///   ‖d⁽ℓ⁾‖∞ <= k_combined · Δc⁽ℓ⁾ + floor_coefficient · ‖c⁽ℓ⁾‖∞
/// with k_combined = K_dec ‖α‖₁ + M K_α, K_dec = 2Σ|dec_i||i|, M = ‖dec‖₁,
/// K_α = Σ|α_i||i| and floor_coefficient = η ‖α‖₁.
struct BoundConstants {
  double k_alpha = 0.0;
  double k_decimation = 0.0;
  double m = 0.0;
  double k_combined = 0.0;
  double floor_coefficient = 0.0;

  double bound(double delta_c, double sup_c) const { return k_combined * delta_c + floor_coefficient * sup_c; }
};

BoundConstants bound_constants(const Mask& alpha, const Mask& decimation, double eta = 0.0);

}  // namespace mmr
