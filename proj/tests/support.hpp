#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mmr/manifold.hpp"
#include "mmr/manifold_pyramid.hpp"
#include "mmr/mask.hpp"

namespace testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline mmr::Mask random_mask(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> first(-4, 4), width(1, 6);
  auto c = random_vector(rng, static_cast<std::size_t>(width(rng)));
  c.front() += 2.0;  // never all zero
  return mmr::Mask(first(rng), c);
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
}

inline Eigen::Matrix3d random_spd(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n;
  Eigen::Matrix3d a;
  for (int i = 0; i < 9; ++i) a.data()[i] = spread * n(rng);
  return mmr::sym_expm(0.5 * (a + a.transpose()));
}

/// A random closed curve on S²: a wobbly circle of latitude.
inline mmr::ManifoldSequence<mmr::Sphere> random_sphere_curve(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  const double p1 = u(rng), p2 = u(rng), a1 = 0.2 * u(rng) / 6.3, tilt = 0.3 * u(rng) / 6.3;
  mmr::ManifoldSequence<mmr::Sphere> c;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    const double phi = 0.5 + a1 * std::cos(2 * t + p1) + tilt * std::sin(t + p2);
    c.emplace_back(std::sin(phi) * std::cos(t), std::sin(phi) * std::sin(t), std::cos(phi));
  }
  return c;
}

/// A random smooth closed curve in SPD(3): exp of a trigonometric symmetric path.
inline mmr::ManifoldSequence<mmr::Spd3> random_spd_curve(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::Matrix3d a, b, c0;
  for (int i = 0; i < 9; ++i) {
    a.data()[i] = 0.4 * g(rng);
    b.data()[i] = 0.4 * g(rng);
    c0.data()[i] = 0.3 * g(rng);
  }
  a = 0.5 * (a + a.transpose());
  b = 0.5 * (b + b.transpose());
  c0 = 0.5 * (c0 + c0.transpose());
  mmr::ManifoldSequence<mmr::Spd3> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    out.push_back(mmr::sym_expm(c0 + std::cos(t) * a + std::sin(t) * b));
  }
  return out;
}

}  // namespace testing
