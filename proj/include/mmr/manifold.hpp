#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "mmr/error.hpp"

namespace mmr {

using Rng = std::mt19937_64;

/// Uniform interface over the three supported Riemannian manifolds. Points
/// and tangent vectors are ambient representations; a tangent vector is only
/// meaningful together with its base point.
template <class M>
concept Manifold = requires(const M& m, const typename M::Point& p, const typename M::Tangent& v, Rng& rng) {
  { M::name } -> std::convertible_to<std::string_view>;
  { m.distance(p, p) } -> std::convertible_to<double>;
  { m.exp(p, v) } -> std::convertible_to<typename M::Point>;
  { m.log(p, p) } -> std::convertible_to<typename M::Tangent>;
  { m.transport(v, p, p) } -> std::convertible_to<typename M::Tangent>;
  { m.norm(p, v) } -> std::convertible_to<double>;
  { m.zero(p) } -> std::convertible_to<typename M::Tangent>;
  { m.random_tangent(p, rng) } -> std::convertible_to<typename M::Tangent>;
  { m.injectivity_radius() } -> std::convertible_to<double>;
  { m.max_spread() } -> std::convertible_to<double>;
  m.validate(p);
};

template <class M>
struct TangentVector {
  typename M::Point base;
  typename M::Tangent vec;
};

/// ℝⁿ with the standard metric.
class Euclidean {
 public:
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;
  static constexpr std::string_view name = "euclidean";

  explicit Euclidean(int dim = 1) : dim_(dim) {}

  int dim() const { return dim_; }
  int tangent_dim() const { return dim_; }

  double distance(const Point& x, const Point& y) const { return (x - y).norm(); }
  Point exp(const Point& p, const Tangent& v) const { return p + v; }
  Tangent log(const Point& p, const Point& q) const { return q - p; }
  Tangent transport(const Tangent& v, const Point&, const Point&) const { return v; }
  double norm(const Point&, const Tangent& v) const { return v.norm(); }
  Tangent zero(const Point& p) const { return Tangent::Zero(p.size()); }
  Tangent random_tangent(const Point& p, Rng& rng) const;
  double injectivity_radius() const { return std::numeric_limits<double>::infinity(); }
  double max_spread() const { return std::numeric_limits<double>::infinity(); }
  void validate(const Point& p) const;

  /// Closed-form center of mass Σ w_i p_i.
  Point affine_combination(std::span<const Point> pts, std::span<const double> w) const;

 private:
  int dim_;
};

/// The unit sphere S² ⊂ ℝ³.
class Sphere {
 public:
  using Point = Eigen::Vector3d;
  using Tangent = Eigen::Vector3d;
  static constexpr std::string_view name = "s2";

  /// Pairs with ⟨x, y⟩ <= -1 + kAntipodalTol are treated as antipodal.
  static constexpr double kAntipodalTol = 1e-12;

  /// `max_spread` bounds the distance from the anchor point of a weighted
  /// mean to every other point with nonzero weight.
  explicit Sphere(double max_spread = 2.0 * std::numbers::pi / 3.0) : max_spread_(max_spread) {}

  int tangent_dim() const { return 2; }

  double distance(const Point& x, const Point& y) const;
  Point exp(const Point& p, const Tangent& v) const;
  /// Throws CutLocus for (numerically) antipodal points.
  Tangent log(const Point& p, const Point& q) const;
  /// Transport along the minimizing geodesic from p to q.
  Tangent transport(const Tangent& v, const Point& p, const Point& q) const;
  double norm(const Point&, const Tangent& v) const { return v.norm(); }
  Tangent zero(const Point&) const { return Tangent::Zero(); }
  Tangent random_tangent(const Point& p, Rng& rng) const;
  double injectivity_radius() const { return std::numbers::pi; }
  double max_spread() const { return max_spread_; }
  void validate(const Point& p) const;

 private:
  double max_spread_;
};

/// 3x3 symmetric positive-definite matrices with the affine-invariant metric
/// ⟨U, V⟩_P = tr(P⁻¹ U P⁻¹ V).
class Spd3 {
 public:
  using Point = Eigen::Matrix3d;
  using Tangent = Eigen::Matrix3d;
  static constexpr std::string_view name = "spd3";

  explicit Spd3(double max_spread = std::numeric_limits<double>::infinity()) : max_spread_(max_spread) {}

  int tangent_dim() const { return 6; }

  double distance(const Point& x, const Point& y) const;
  Point exp(const Point& p, const Tangent& v) const;
  Tangent log(const Point& p, const Point& q) const;
  /// v ↦ E v Eᵀ with E = (q p⁻¹)^{1/2}.
  Tangent transport(const Tangent& v, const Point& p, const Point& q) const;
  double norm(const Point& p, const Tangent& v) const;
  Tangent zero(const Point&) const { return Tangent::Zero(); }
  Tangent random_tangent(const Point& p, Rng& rng) const;
  double injectivity_radius() const { return std::numeric_limits<double>::infinity(); }
  double max_spread() const { return max_spread_; }
  void validate(const Point& p) const;

 private:
  double max_spread_;
};

/// Matrix functions of a symmetric 3x3 matrix through its eigendecomposition.
Eigen::Matrix3d sym_expm(const Eigen::Matrix3d& a);
Eigen::Matrix3d sym_logm(const Eigen::Matrix3d& a);
Eigen::Matrix3d sym_sqrtm(const Eigen::Matrix3d& a);
Eigen::Matrix3d sym_inv_sqrtm(const Eigen::Matrix3d& a);

struct MeanOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double step = 1.0;
};

template <class P>
struct MeanResult {
  P point;
  int iterations = 0;
  /// ‖Σ w_i log(x, p_i)‖ at the returned point.
  double residual = 0.0;
};

/// Weighted Riemannian center of mass, argmin_x Σ w_i ρ(x, p_i)².
///
/// Weights must sum to 1 and may be negative. Runs the fixed-point iteration
/// x ← exp(x, step Σ w_i log(x, p_i)) from the point with the largest |w_i|
/// until the gradient norm drops to opts.tol; Euclidean inputs use the
/// closed form. Throws SpreadExceeded when a weighted point lies farther than
/// max_spread() from the starting point, NoConvergence after max_iter.
template <Manifold M>
MeanResult<typename M::Point> weighted_mean(const M& m, std::span<const typename M::Point> pts,
                                            std::span<const double> w, const MeanOptions& opts = {}) {
  if (pts.empty() || pts.size() != w.size()) {
    throw Error(ErrorCode::InvalidArgument, "weighted mean needs matching, nonempty points and weights");
  }
  double total = 0.0;
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    if (std::abs(w[i]) > std::abs(w[anchor])) anchor = i;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "weights sum to " + std::to_string(total) + ", expected 1");
  }

  if constexpr (requires { m.affine_combination(pts, w); }) {
    return {m.affine_combination(pts, w), 0, 0.0};
  } else {
    const auto& start = pts[anchor];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (w[i] == 0.0) continue;
      const double d = m.distance(start, pts[i]);
      if (d > m.max_spread()) {
        throw Error(ErrorCode::SpreadExceeded, "point " + std::to_string(i) + " is " + std::to_string(d) +
                                                   " from the anchor, guard is " + std::to_string(m.max_spread()));
      }
    }
    typename M::Point x = start;
    for (int it = 0; it <= opts.max_iter; ++it) {
      typename M::Tangent g = m.zero(x);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (w[i] != 0.0) g += w[i] * m.log(x, pts[i]);
      }
      const double r = m.norm(x, g);
      if (r <= opts.tol) return {x, it, r};
      if (it == opts.max_iter) break;
      x = m.exp(x, opts.step * g);
    }
    throw Error(ErrorCode::NoConvergence,
                "weighted mean did not reach tolerance " + std::to_string(opts.tol) + " in " + std::to_string(opts.max_iter) + " iterations");
  }
}

}  // namespace mmr
