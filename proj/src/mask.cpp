#include "mmr/mask.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmr/error.hpp"

namespace mmr {

namespace {

int parity(int k) { return ((k % 2) + 2) % 2; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Mask::Mask() : first_(0), coeffs_{1.0} {}

Mask::Mask(int first_index, std::vector<double> coeffs) : first_(first_index) {
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "mask coefficient is not finite");
  }
  auto nz = [](double c) { return c != 0.0; };
  auto lo = std::find_if(coeffs.begin(), coeffs.end(), nz);
  if (lo == coeffs.end()) throw Error(ErrorCode::InvalidArgument, "mask has no nonzero coefficient");
  auto hi = std::find_if(coeffs.rbegin(), coeffs.rend(), nz).base();
  first_ += static_cast<int>(lo - coeffs.begin());
  coeffs_.assign(lo, hi);
}

double Mask::operator[](int k) const {
  if (k < first_ || k > last_index()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k - first_)];
}

double Mask::sum() const {
  double s = 0.0;
  for (double c : coeffs_) s += c;
  return s;
}

double Mask::parity_sum(int p) const {
  double s = 0.0;
  for (int k = first_; k <= last_index(); ++k) {
    if (parity(k) == parity(p)) s += (*this)[k];
  }
  return s;
}

std::size_t Mask::nonzeros() const {
  return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; }));
}

bool Mask::is_subdivision_invariant(double tol) const {
  return std::abs(parity_sum(0) - 1.0) <= tol && std::abs(parity_sum(1) - 1.0) <= tol;
}

bool Mask::is_decimation_invariant(double tol) const { return std::abs(sum() - 1.0) <= tol; }

Mask bspline_mask(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "B-spline order must be >= 1, got " + std::to_string(order));
  std::vector<double> c(static_cast<std::size_t>(order) + 2);
  const double scale = std::ldexp(1.0, -order);
  for (int k = 0; k <= order + 1; ++k) c[static_cast<std::size_t>(k)] = scale * binomial(order + 1, k);
  return Mask(-((order + 1) / 2), std::move(c));
}

Mask downsample_mask(const Mask& mask) {
  // ceil(first/2) .. floor(last/2)
  const int lo = -((-mask.first_index()) >> 1);
  const int hi = mask.last_index() >> 1;
  std::vector<double> c;
  for (int k = lo; k <= hi; ++k) c.push_back(mask[2 * k]);
  return Mask(lo, std::move(c));
}

Mask upsample_mask(const Mask& mask) {
  std::vector<double> c(2 * mask.width() - 1, 0.0);
  for (std::size_t i = 0; i < mask.width(); ++i) c[2 * i] = mask.coeffs()[i];
  return Mask(2 * mask.first_index(), std::move(c));
}

Mask convolve(const Mask& a, const Mask& b) {
  std::vector<double> c(a.width() + b.width() - 1, 0.0);
  for (std::size_t i = 0; i < a.width(); ++i) {
    for (std::size_t j = 0; j < b.width(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return Mask(a.first_index() + b.first_index(), std::move(c));
}

MaskConstants mask_constants(const Mask& mask) {
  MaskConstants out;
  for (int k = mask.first_index(); k <= mask.last_index(); ++k) {
    const double a = std::abs(mask[k]);
    out.l1_norm += a;
    out.moment += a * std::abs(k);
    out.max_abs = std::max(out.max_abs, a);
  }
  return out;
}

}  // namespace mmr
