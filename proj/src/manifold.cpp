#include "mmr/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

namespace mmr {

namespace {

template <class F>
Eigen::Matrix3d sym_fn(const Eigen::Matrix3d& a, F f) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (a + a.transpose()));
  Eigen::Vector3d ev = es.eigenvalues();
  for (int i = 0; i < 3; ++i) ev[i] = f(ev[i]);
  Eigen::Matrix3d out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::Matrix3d symmetrize(const Eigen::Matrix3d& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

Eigen::Matrix3d sym_expm(const Eigen::Matrix3d& a) {
  return sym_fn(a, [](double x) { return std::exp(x); });
}

Eigen::Matrix3d sym_logm(const Eigen::Matrix3d& a) {
  return sym_fn(a, [](double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "matrix logarithm of a non-positive-definite matrix");
    return std::log(x);
  });
}

Eigen::Matrix3d sym_sqrtm(const Eigen::Matrix3d& a) {
  return sym_fn(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Eigen::Matrix3d sym_inv_sqrtm(const Eigen::Matrix3d& a) {
  return sym_fn(a, [](double x) { return 1.0 / std::sqrt(x); });
}

// ---------------------------------------------------------------- Euclidean

Euclidean::Tangent Euclidean::random_tangent(const Point& p, Rng& rng) const {
  std::normal_distribution<double> n01;
  Tangent v(p.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = n01(rng);
  return v;
}

void Euclidean::validate(const Point& p) const {
  if (p.size() != dim_) {
    throw Error(ErrorCode::InvalidArgument, "expected a " + std::to_string(dim_) + "-vector, got size " + std::to_string(p.size()));
  }
  if (!p.allFinite()) throw Error(ErrorCode::InvalidArgument, "point has non-finite coordinates");
}

Euclidean::Point Euclidean::affine_combination(std::span<const Point> pts, std::span<const double> w) const {
  Point x = Point::Zero(pts.front().size());
  for (std::size_t i = 0; i < pts.size(); ++i) x += w[i] * pts[i];
  return x;
}

// ------------------------------------------------------------------- Sphere

double Sphere::distance(const Point& x, const Point& y) const {
  return std::atan2(x.cross(y).norm(), x.dot(y));
}

Sphere::Point Sphere::exp(const Point& p, const Tangent& v) const {
  const double n = v.norm();
  if (n >= std::numbers::pi) {
    throw Error(ErrorCode::BeyondInjectivity, "tangent norm " + std::to_string(n) + " >= pi");
  }
  if (n == 0.0) return p;
  Point x = std::cos(n) * p + (std::sin(n) / n) * v;
  return x.normalized();
}

Sphere::Tangent Sphere::log(const Point& p, const Point& q) const {
  const double c = p.dot(q);
  if (c <= -1.0 + kAntipodalTol) throw Error(ErrorCode::CutLocus, "log undefined at cut locus (antipodal points)");
  Tangent v = q - c * p;
  v -= v.dot(p) * p;
  const double s = v.norm();
  if (s == 0.0) return Tangent::Zero();
  return (std::atan2(s, c) / s) * v;
}

Sphere::Tangent Sphere::transport(const Tangent& v, const Point& p, const Point& q) const {
  // rotation in span{p, q}; this form stays accurate as q -> p
  const double c = 1.0 + p.dot(q);
  if (c <= kAntipodalTol) throw Error(ErrorCode::CutLocus, "transport undefined between antipodal points");
  Tangent out = v - (q.dot(v) / c) * (p + q);
  out -= out.dot(q) * q;
  return out;
}

Sphere::Tangent Sphere::random_tangent(const Point& p, Rng& rng) const {
  std::normal_distribution<double> n01;
  Tangent v(n01(rng), n01(rng), n01(rng));
  return v - v.dot(p) * p;
}

void Sphere::validate(const Point& p) const {
  if (!p.allFinite() || std::abs(p.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "S2 point must have unit norm, got " + std::to_string(p.norm()));
  }
}

// --------------------------------------------------------------------- Spd3

double Spd3::distance(const Point& x, const Point& y) const {
  // eigenvalues of x⁻¹y
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(symmetrize(y), symmetrize(x), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double l = std::log(es.eigenvalues()[i]);
    s += l * l;
  }
  return std::sqrt(s);
}

Spd3::Point Spd3::exp(const Point& p, const Tangent& v) const {
  const Eigen::Matrix3d s = sym_sqrtm(p);
  const Eigen::Matrix3d si = sym_inv_sqrtm(p);
  return symmetrize(s * sym_expm(si * v * si) * s);
}

Spd3::Tangent Spd3::log(const Point& p, const Point& q) const {
  const Eigen::Matrix3d s = sym_sqrtm(p);
  const Eigen::Matrix3d si = sym_inv_sqrtm(p);
  return symmetrize(s * sym_logm(si * q * si) * s);
}

Spd3::Tangent Spd3::transport(const Tangent& v, const Point& p, const Point& q) const {
  const Eigen::Matrix3d s = sym_sqrtm(p);
  const Eigen::Matrix3d si = sym_inv_sqrtm(p);
  const Eigen::Matrix3d e = s * sym_sqrtm(si * q * si) * si;
  return symmetrize(e * v * e.transpose());
}

double Spd3::norm(const Point& p, const Tangent& v) const {
  const Eigen::Matrix3d si = sym_inv_sqrtm(p);
  return (si * v * si).norm();
}

Spd3::Tangent Spd3::random_tangent(const Point& p, Rng& rng) const {
  // isotropic in the metric at p: coordinates in an orthonormal basis of Sym(3)
  std::normal_distribution<double> n01;
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) a(i, i) = n01(rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) a(i, j) = a(j, i) = n01(rng) / std::numbers::sqrt2;
  }
  const Eigen::Matrix3d s = sym_sqrtm(p);
  return symmetrize(s * a * s);
}

void Spd3::validate(const Point& p) const {
  if (!p.allFinite()) throw Error(ErrorCode::InvalidArgument, "SPD point has non-finite entries");
  const double asym = (p - p.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidArgument, "SPD point is not symmetric (asymmetry " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(symmetrize(p), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()[0] > 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "SPD point has eigenvalue " + std::to_string(es.eigenvalues()[0]));
  }
}

}  // namespace mmr
