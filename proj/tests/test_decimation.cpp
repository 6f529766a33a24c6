#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "mmr/decimation.hpp"
#include "mmr/error.hpp"

using namespace mmr;

namespace {

// closed forms of the even-inverse
double quadratic_gamma(int k) { return k < 0 ? 0.0 : (4.0 / 3.0) * std::pow(-1.0 / 3.0, k); }

double cubic_gamma(int k) {
  const double lambda = 3.0 - 2.0 * std::numbers::sqrt2;
  return std::numbers::sqrt2 * std::pow(-lambda, std::abs(k));
}

}  // namespace

TEST_CASE("quadratic even-inverse matches its closed form") {
  const DecimationSolution s = solve_decimation(bspline_mask(2));
  for (int k = -20; k <= 20; ++k) {
    CAPTURE(k);
    CHECK(std::abs(s.gamma[k] - quadratic_gamma(k)) <= 1e-12);
  }
  CHECK(s.residual <= 1e-12);
  CHECK(s.decay_lambda == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("cubic even-inverse matches its closed form") {
  const DecimationSolution s = solve_decimation(bspline_mask(3));
  for (int k = -30; k <= 30; ++k) {
    CAPTURE(k);
    CHECK(std::abs(s.gamma[k] - cubic_gamma(k)) <= 1e-12);
  }
  CHECK(s.gamma[0] == doctest::Approx(1.4142).epsilon(5e-5));
  CHECK(s.gamma[1] == doctest::Approx(-0.2426).epsilon(5e-4));
  CHECK(s.residual <= 1e-12);
}

TEST_CASE("factorization agrees with the least-squares solve") {
  for (int order : {2, 3, 4, 5, 6, 7}) {
    CAPTURE(order);
    const DecimationSolution s = solve_decimation(bspline_mask(order), 40);
    const Mask direct = solve_decimation_direct(bspline_mask(order), 40);
    for (int k = -40; k <= 40; ++k) CHECK(std::abs(s.gamma[k] - direct[k]) <= 1e-10);
    // γ * α↓2 = δ
    const Mask prod = convolve(s.gamma, downsample_mask(bspline_mask(order)));
    for (int k = -30; k <= 30; ++k) CHECK(std::abs(prod[k] - (k == 0 ? 1.0 : 0.0)) <= 1e-10);
  }
}

TEST_CASE("interpolating-like masks give a finite inverse") {
  // α↓2 = δ  ->  γ = δ
  const Mask linear(-1, {0.5, 1.0, 0.5});
  const DecimationSolution s = solve_decimation(linear);
  CHECK(s.gamma == Mask::delta());
  CHECK(s.decay_lambda == 0.0);
}

TEST_CASE("decimation errors") {
  CHECK_THROWS_AS(solve_decimation(Mask(0, {1.0, 1.0, 1.0})), Error);
  try {
    solve_decimation(Mask(0, {1.0, 1.0, 1.0}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonShiftInvariant);
  }
  // α↓2 = (1 + z)/2 vanishes at z = -1
  try {
    solve_decimation(Mask(0, {0.5, 1.0, 0.5}));
    FAIL("expected a unit circle root");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnitCircleRoot);
  }
  CHECK_THROWS_AS(truncate(solve_decimation(bspline_mask(3)).gamma, 10.0), Error);
  CHECK_THROWS_AS(truncate(Mask::delta(), 0.0), Error);
  CHECK_THROWS_AS(normalize(Mask(0, {1.0, -1.0})), Error);
}

TEST_CASE("truncation support sizes") {
  const DecimationMasks c = decimation_masks(bspline_mask(3), 1e-5);
  CHECK(c.truncated.nonzeros() == 13);
  CHECK(c.zeta.nonzeros() == 13);
  CHECK(c.zeta.first_index() == -6);
  const DecimationMasks q = decimation_masks(bspline_mask(2), 1e-4);
  CHECK(q.truncated.nonzeros() == 9);
  CHECK(q.zeta.first_index() == 0);
  CHECK(q.zeta.is_decimation_invariant());
  CHECK(c.zeta.is_decimation_invariant());
}

TEST_CASE("tail mass matches the geometric tail") {
  const DecimationMasks c = decimation_masks(bspline_mask(3), 1e-5);
  const double lambda = 3.0 - 2.0 * std::numbers::sqrt2;
  // 2 Σ_{k>6} √2 λ^k
  const double oracle = 2.0 * std::numbers::sqrt2 * std::pow(lambda, 7) / (1.0 - lambda);
  CHECK(c.eta == doctest::Approx(oracle).epsilon(1e-9));
  const DecimationMasks q = decimation_masks(bspline_mask(2), 1e-4);
  CHECK(q.eta == doctest::Approx((4.0 / 3.0) * std::pow(1.0 / 3.0, 9) / (1.0 - 1.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("solve is fast") {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 10; ++i) (void)solve_decimation(bspline_mask(3));
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);
}
