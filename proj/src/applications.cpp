#include "mmr/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmr {

namespace {

constexpr double kPi = std::numbers::pi;

// Curve constants. Chosen so that P_min at 10 samples is about 1.27.
constexpr double kEigBase[3] = {2.93, 2.78, 1.06};
constexpr double kEigAmp[3] = {0.60, 0.41, 0.10};
constexpr double kEigPhase[3] = {5.54, 6.23, 5.78};
constexpr double kAxis[3] = {-0.88, 0.52, 1.06};

}  // namespace

ManifoldSequence<Sphere> flower_curve(int leaves, int samples) {
  if (leaves < 1 || samples < 4) throw Error(ErrorCode::InvalidArgument, "flower curve needs leaves >= 1 and samples >= 4");
  ManifoldSequence<Sphere> out(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * kPi * k / samples;
    const double phi = kPi / 16.0 * std::cos(leaves * t) + kPi / 6.0;
    out[static_cast<std::size_t>(k)] = {std::sin(phi) * std::cos(t), std::sin(phi) * std::sin(t), std::cos(phi)};
  }
  return out;
}

std::pair<int, int> spd_anomaly_window(int samples) { return {samples / 3, 2 * samples / 3}; }

ManifoldSequence<Spd3> spd_curve(int samples, std::optional<SpdAnomaly> anomaly) {
  if (samples < 4) throw Error(ErrorCode::InvalidArgument, "SPD curve needs at least 4 samples");
  if (anomaly && !(anomaly->scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "anomaly scale must be positive");
  const Eigen::Vector3d axis = Eigen::Vector3d(kAxis[0], kAxis[1], kAxis[2]).normalized();
  const auto [lo, hi] = spd_anomaly_window(samples);
  ManifoldSequence<Spd3> out(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * kPi * k / samples;
    Eigen::Vector3d lam;
    for (int i = 0; i < 3; ++i) lam[i] = kEigBase[i] + kEigAmp[i] * std::cos(2.0 * t + kEigPhase[i]);
    if (anomaly && k >= lo && k < hi) lam *= anomaly->scale;
    const Eigen::Matrix3d r = Eigen::AngleAxisd(t, axis).toRotationMatrix();
    Eigen::Matrix3d p = r * lam.asDiagonal() * r.transpose();
    out[static_cast<std::size_t>(k)] = 0.5 * (p + p.transpose());
  }
  return out;
}

Sequence sine_samples(int samples) {
  Sequence s(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) s[static_cast<std::size_t>(k)] = std::sin(3.0 * 2.0 * kPi * k / samples);
  return s;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

std::vector<Anomaly> flag_outliers(const std::vector<std::vector<double>>& layer_norms, const AnomalyPolicy& policy) {
  std::vector<Anomaly> out;
  const int levels = static_cast<int>(layer_norms.size());
  for (int l = 1; l <= levels; ++l) {
    const auto& norms = layer_norms[static_cast<std::size_t>(l - 1)];
    const double med = median(norms);
    std::vector<double> dev(norms.size());
    for (std::size_t k = 0; k < norms.size(); ++k) dev[k] = std::abs(norms[k] - med);
    const double cut = std::max(med + policy.z * median(dev), policy.min_norm);
    for (std::size_t k = 0; k < norms.size(); ++k) {
      if (norms[k] > cut) {
        const auto idx = static_cast<long long>(k);
        out.push_back({l, static_cast<int>(k), norms[k], std::ldexp(static_cast<double>(k), -l), idx << (levels - l)});
      }
    }
  }
  return out;
}

double fitted_ratio(const std::vector<double>& values) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = static_cast<double>(i);
    const double y = std::log2(values[i]);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  if (n < 2) return 0.0;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp2(slope);
}

std::vector<double> per_level_max(const LinearPyramid& p) {
  std::vector<double> out;
  for (const auto& d : p.details) out.push_back(sup_norm(d));
  return out;
}

}  // namespace mmr
