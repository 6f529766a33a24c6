#pragma once

#include <optional>

#include "mmr/mask.hpp"

namespace mmr {

/// The even-inverse γ of a refinement mask α, i.e. the solution of
/// γ * (α↓2) = δ, computed on the window |k| <= support_radius.
struct DecimationSolution {
  Mask gamma;
  int support_radius = 0;
  /// Geometric envelope |γ_k| <= decay_C * decay_lambda^|k| on the window.
  /// decay_lambda is 0 when γ is finitely supported (α↓2 a monomial).
  double decay_C = 0.0;
  double decay_lambda = 0.0;
  /// max |(γ * α↓2 - δ)_k| over |k| <= support_radius.
  double residual = 0.0;
};

/// Solves the convolutional equation by factoring the Laurent symbol of α↓2
/// and expanding its reciprocal into one-sided geometric series, one per
/// root (roots inside the unit circle give the anticausal part).
///
/// Without an explicit radius, the smallest r with C λ^r < 1e-15 is used.
/// Throws NonShiftInvariant for a bad α and UnitCircleRoot when the symbol
/// vanishes within 1e-8 of the unit circle.
DecimationSolution solve_decimation(const Mask& alpha, std::optional<int> support_radius = std::nullopt);

/// Independent route to γ: least-squares solve of the finite convolution
/// system on a window of 4x the radius, cropped to |k| <= support_radius.
Mask solve_decimation_direct(const Mask& alpha, int support_radius);

/// Keeps coefficients with |γ_k| > epsilon. Throws EmptyTruncation if none do.
Mask truncate(const Mask& gamma, double epsilon);

/// ζ_k = γ̃_k / Σγ̃. Throws NearZeroSum when |Σγ̃| < 1e-8.
Mask normalize(const Mask& truncated);

/// η = Σ_{k ∉ Ω} |γ_k| with Ω the support of `truncated`; the part of γ
/// beyond the computed window is bounded by its geometric envelope.
double tail_mass(const DecimationSolution& solution, const Mask& truncated);

/// Everything derived from α and a truncation parameter.
struct DecimationMasks {
  DecimationSolution solution;
  Mask truncated;
  Mask zeta;
  double eta = 0.0;
};

DecimationMasks decimation_masks(const Mask& alpha, double epsilon);

}  // namespace mmr
