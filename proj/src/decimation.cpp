#include "mmr/decimation.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mmr/error.hpp"

namespace mmr {

namespace {

using cd = std::complex<double>;

constexpr double kUnitCircleTol = 1e-8;
constexpr double kEnvelopeTarget = 1e-15;
constexpr int kMaxRadius = 4096;

/// Laurent symbol of a mask, stored as z^shift * poly(z).
struct Symbol {
  int shift = 0;
  Eigen::VectorXd poly;  // increasing powers
  std::vector<cd> roots;
};

Symbol factor_symbol(const Mask& a) {
  Symbol s;
  s.shift = a.first_index();
  s.poly.resize(static_cast<Eigen::Index>(a.width()));
  for (std::size_t i = 0; i < a.width(); ++i) s.poly[static_cast<Eigen::Index>(i)] = a.coeffs()[i];
  if (a.width() > 1) {
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(s.poly);
    for (const auto& r : solver.roots()) s.roots.push_back(r);
  }
  for (const auto& r : s.roots) {
    if (std::abs(std::abs(r) - 1.0) < kUnitCircleTol) {
      throw Error(ErrorCode::UnitCircleRoot, "symbol root on unit circle (|z| = " + std::to_string(std::abs(r)) + ")");
    }
  }
  return s;
}

double decay_rate(const Symbol& s) {
  double lambda = 0.0;
  for (const auto& r : s.roots) {
    const double m = std::abs(r);
    lambda = std::max(lambda, m < 1.0 ? m : 1.0 / m);
  }
  return lambda;
}

bool has_clustered_roots(const Symbol& s) {
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < s.roots.size(); ++j) {
      const double scale = std::max(1.0, std::abs(s.roots[i]));
      if (std::abs(s.roots[i] - s.roots[j]) < 1e-6 * scale) return true;
    }
  }
  return false;
}

cd poly_derivative(const Eigen::VectorXd& p, cd z) {
  cd acc = 0.0;
  for (Eigen::Index k = p.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * p[k];
  return acc;
}

/// Coefficients h_k of 1/poly(z) for k in [lo, hi], simple roots.
std::vector<double> reciprocal_partial_fractions(const Symbol& s, int lo, int hi) {
  std::vector<cd> residues;
  for (const auto& r : s.roots) residues.push_back(1.0 / poly_derivative(s.poly, r));
  std::vector<double> h;
  h.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) {
    cd acc = 0.0;
    for (std::size_t j = 0; j < s.roots.size(); ++j) {
      const cd r = s.roots[j];
      const bool inside = std::abs(r) < 1.0;
      // 1/(z - r) = Σ_{m>=0} r^m z^{-m-1}     (|r| < 1)
      //           = -Σ_{m>=0} r^{-m-1} z^m    (|r| > 1)
      if (inside && k <= -1) acc += residues[j] * std::pow(r, -k - 1);
      if (!inside && k >= 0) acc -= residues[j] * std::pow(r, -k - 1);
    }
    h.push_back(acc.real());
  }
  return h;
}

/// Same coefficients as a product of truncated one-sided series; handles
/// repeated roots.
std::vector<double> reciprocal_series_product(const Symbol& s, int lo, int hi) {
  const double lambda = decay_rate(s);
  const int terms = std::max(hi, -lo) + 8 + static_cast<int>(std::ceil(std::log(1e-18) / std::log(std::max(lambda, 1e-3))));
  // series[idx] holds the coefficient of z^(idx + offset)
  std::vector<cd> acc{1.0 / s.poly[s.poly.size() - 1]};
  int offset = 0;
  for (const auto& r : s.roots) {
    std::vector<cd> factor(static_cast<std::size_t>(terms));
    int foff = 0;
    if (std::abs(r) < 1.0) {
      foff = -terms;
      for (int m = 0; m < terms; ++m) factor[static_cast<std::size_t>(terms - 1 - m)] = std::pow(r, m);
    } else {
      for (int m = 0; m < terms; ++m) factor[static_cast<std::size_t>(m)] = -std::pow(r, -m - 1);
    }
    std::vector<cd> next(acc.size() + factor.size() - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += acc[i] * factor[j];
    }
    acc = std::move(next);
    offset += foff;
  }
  std::vector<double> h;
  for (int k = lo; k <= hi; ++k) {
    const int idx = k - offset;
    h.push_back(idx >= 0 && idx < static_cast<int>(acc.size()) ? acc[static_cast<std::size_t>(idx)].real() : 0.0);
  }
  return h;
}

std::vector<double> gamma_window(const Symbol& s, int radius) {
  // γ(z) = z^-shift / poly(z), so γ_k = h_{k+shift}
  const int lo = -radius + s.shift;
  const int hi = radius + s.shift;
  if (s.roots.empty()) {
    // monomial symbol: a single coefficient 1/c at k = -shift
    std::vector<double> h(static_cast<std::size_t>(hi - lo + 1), 0.0);
    if (lo <= 0 && 0 <= hi) h[static_cast<std::size_t>(-lo)] = 1.0 / s.poly[0];
    return h;
  }
  return has_clustered_roots(s) ? reciprocal_series_product(s, lo, hi) : reciprocal_partial_fractions(s, lo, hi);
}

double envelope_constant(const std::vector<double>& g, int radius, double lambda) {
  double c = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::abs(g[static_cast<std::size_t>(k + radius)]);
    if (v == 0.0) continue;
    const double env = std::pow(lambda, std::abs(k));
    if (env < 1e-290) continue;
    c = std::max(c, v / env);
  }
  return c;
}

void require_subdivision_invariant(const Mask& alpha) {
  if (!alpha.is_subdivision_invariant()) {
    throw Error(ErrorCode::NonShiftInvariant, "subdivision mask even/odd sums are " + std::to_string(alpha.parity_sum(0)) +
                                                  ", " + std::to_string(alpha.parity_sum(1)) + " (expected 1, 1)");
  }
}

}  // namespace

DecimationSolution solve_decimation(const Mask& alpha, std::optional<int> support_radius) {
  require_subdivision_invariant(alpha);
  if (support_radius && *support_radius < 1) throw Error(ErrorCode::InvalidArgument, "support radius must be positive");
  const Mask a = downsample_mask(alpha);
  const Symbol s = factor_symbol(a);

  DecimationSolution out;
  out.decay_lambda = decay_rate(s);

  int radius = 0;
  if (support_radius) {
    radius = *support_radius;
  } else if (s.roots.empty()) {
    radius = std::max(1, std::abs(s.shift));
  } else {
    const int probe = 64;
    const double c = envelope_constant(gamma_window(s, probe), probe, out.decay_lambda);
    radius = 1;
    while (radius < kMaxRadius && c * std::pow(out.decay_lambda, radius) >= kEnvelopeTarget) ++radius;
  }

  std::vector<double> g = gamma_window(s, radius);
  out.decay_C = out.decay_lambda > 0.0 ? envelope_constant(g, radius, out.decay_lambda)
                                       : *std::max_element(g.begin(), g.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  out.decay_C = std::abs(out.decay_C);
  out.gamma = Mask(-radius, std::move(g));
  out.support_radius = radius;

  const Mask check = convolve(out.gamma, a);
  for (int k = -radius; k <= radius; ++k) {
    out.residual = std::max(out.residual, std::abs(check[k] - (k == 0 ? 1.0 : 0.0)));
  }
  return out;
}

Mask solve_decimation_direct(const Mask& alpha, int support_radius) {
  require_subdivision_invariant(alpha);
  if (support_radius < 1) throw Error(ErrorCode::InvalidArgument, "support radius must be positive");
  const Mask a = downsample_mask(alpha);
  const int w = 4 * support_radius;
  const int cols = 2 * w + 1;
  const int row_lo = -w + a.first_index();
  const int rows = 2 * w + static_cast<int>(a.width());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    const int n = row_lo + r;
    if (n == 0) rhs[r] = 1.0;
    for (int c = 0; c < cols; ++c) m(r, c) = a[n - (c - w)];
  }
  const Eigen::VectorXd x = m.householderQr().solve(rhs);
  std::vector<double> g;
  for (int k = -support_radius; k <= support_radius; ++k) g.push_back(x[k + w]);
  return Mask(-support_radius, std::move(g));
}

Mask truncate(const Mask& gamma, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation parameter must be positive");
  std::vector<double> c(gamma.coeffs().begin(), gamma.coeffs().end());
  bool any = false;
  for (double& v : c) {
    if (std::abs(v) > epsilon) {
      any = true;
    } else {
      v = 0.0;
    }
  }
  if (!any) throw Error(ErrorCode::EmptyTruncation, "no coefficient exceeds epsilon = " + std::to_string(epsilon));
  return Mask(gamma.first_index(), std::move(c));
}

Mask normalize(const Mask& truncated) {
  const double s = truncated.sum();
  if (std::abs(s) < 1e-8) throw Error(ErrorCode::NearZeroSum, "cannot normalize mask with coefficient sum " + std::to_string(s));
  std::vector<double> c(truncated.coeffs().begin(), truncated.coeffs().end());
  for (double& v : c) v /= s;
  return Mask(truncated.first_index(), std::move(c));
}

double tail_mass(const DecimationSolution& solution, const Mask& truncated) {
  const Mask& g = solution.gamma;
  for (int k = truncated.first_index(); k <= truncated.last_index(); ++k) {
    if (truncated[k] != 0.0 && g[k] == 0.0) throw Error(ErrorCode::InvalidArgument, "truncated support is not inside gamma");
  }
  double eta = 0.0;
  for (int k = g.first_index(); k <= g.last_index(); ++k) {
    if (truncated[k] == 0.0) eta += std::abs(g[k]);
  }
  const double lambda = solution.decay_lambda;
  if (lambda > 0.0) {
    const int r = solution.support_radius;
    eta += 2.0 * solution.decay_C * std::pow(lambda, r + 1) / (1.0 - lambda);
  }
  return eta;
}

DecimationMasks decimation_masks(const Mask& alpha, double epsilon) {
  DecimationMasks out{solve_decimation(alpha), Mask(), Mask(), 0.0};
  out.truncated = truncate(out.solution.gamma, epsilon);
  out.zeta = normalize(out.truncated);
  out.eta = tail_mass(out.solution, out.truncated);
  return out;
}

}  // namespace mmr
