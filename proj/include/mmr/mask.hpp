#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mmr {

/// A finitely supported real sequence a_k, k = first_index() .. last_index().
///
/// Leading and trailing zeros are trimmed on construction, so the support
/// width is well defined; interior zeros are kept. Masks are immutable
/// values.
class Mask {
 public:
  /// The Kronecker delta.
  Mask();
  Mask(int first_index, std::vector<double> coeffs);

  static Mask delta() { return Mask(); }

  int first_index() const { return first_; }
  int last_index() const { return first_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t width() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Coefficient at index k, zero outside the support.
  double operator[](int k) const;

  double sum() const;
  /// Sum of the coefficients at even (parity = 0) or odd (parity = 1) indices.
  double parity_sum(int parity) const;
  /// Number of nonzero coefficients, i.e. |support|.
  std::size_t nonzeros() const;

  /// Even and odd sums are both 1 (refinement reproduces constants).
  bool is_subdivision_invariant(double tol = 1e-12) const;
  /// Coefficients sum to 1.
  bool is_decimation_invariant(double tol = 1e-12) const;

  bool operator==(const Mask&) const = default;

 private:
  int first_ = 0;
  std::vector<double> coeffs_;
};

/// B-spline refinement mask of order m: 2^-m binom(m+1, k) at k - ceil(m/2).
Mask bspline_mask(int order);

/// (a↓2)_k = a_2k.
Mask downsample_mask(const Mask& mask);

/// (a↑2)_2k = a_k, zeros at odd indices.
Mask upsample_mask(const Mask& mask);

Mask convolve(const Mask& a, const Mask& b);

struct MaskConstants {
  double l1_norm = 0.0;
  /// Σ|a_i||i|.
  double moment = 0.0;
  double max_abs = 0.0;
};

MaskConstants mask_constants(const Mask& mask);

}  // namespace mmr
