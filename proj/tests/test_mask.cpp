#include <doctest.h>

#include <random>

#include "mmr/error.hpp"
#include "mmr/mask.hpp"
#include "support.hpp"

using namespace mmr;

TEST_CASE("b-spline masks match binomial coefficients") {
  const Mask q = bspline_mask(2);
  CHECK(q.first_index() == -1);
  CHECK(q.width() == 4);
  CHECK(q[-1] == 0.25);
  CHECK(q[0] == 0.75);
  CHECK(q[1] == 0.75);
  CHECK(q[2] == 0.25);

  const Mask c = bspline_mask(3);
  CHECK(c.first_index() == -2);
  const double expect[5] = {1, 4, 6, 4, 1};
  for (int k = -2; k <= 2; ++k) CHECK(c[k] == doctest::Approx(expect[k + 2] / 8.0).epsilon(1e-15));

  for (int m = 1; m <= 8; ++m) {
    CAPTURE(m);
    CHECK(bspline_mask(m).is_subdivision_invariant());
    CHECK(bspline_mask(m).sum() == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(bspline_mask(0), Error);
}

TEST_CASE("mask construction trims zeros and rejects bad input") {
  const Mask m(-3, {0.0, 0.0, 1.0, 0.0, 2.0, 0.0});
  CHECK(m.first_index() == -1);
  CHECK(m.last_index() == 1);
  CHECK(m.width() == 3);
  CHECK(m.nonzeros() == 2);
  CHECK(m[5] == 0.0);
  CHECK_THROWS_AS(Mask(0, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(Mask(0, {1.0, std::nan("")}), Error);
  CHECK(Mask() == Mask::delta());
  CHECK(Mask::delta()[0] == 1.0);
}

TEST_CASE("down and upsampling") {
  const Mask d = downsample_mask(bspline_mask(3));
  CHECK(d.first_index() == -1);
  CHECK(d[-1] == 0.125);
  CHECK(d[0] == 0.75);
  CHECK(d[1] == 0.125);

  const Mask dq = downsample_mask(bspline_mask(2));
  CHECK(dq.first_index() == 0);
  CHECK(dq[0] == 0.75);
  CHECK(dq[1] == 0.25);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Mask m = testing::random_mask(rng);
    CHECK(downsample_mask(upsample_mask(m)) == m);
  }
}

TEST_CASE("convolution is commutative and associative") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Mask a = testing::random_mask(rng), b = testing::random_mask(rng), c = testing::random_mask(rng);
    const Mask ab = convolve(a, b), ba = convolve(b, a);
    CHECK(ab.first_index() == ba.first_index());
    REQUIRE(ab.width() == ba.width());
    for (int k = ab.first_index(); k <= ab.last_index(); ++k) CHECK(ab[k] == doctest::Approx(ba[k]).epsilon(1e-13));
    const Mask l = convolve(ab, c), r = convolve(a, convolve(b, c));
    for (int k = std::min(l.first_index(), r.first_index()); k <= std::max(l.last_index(), r.last_index()); ++k) {
      CHECK(std::abs(l[k] - r[k]) <= 1e-12 * (1.0 + std::abs(l[k])));
    }
    CHECK(convolve(a, Mask::delta()) == a);
    // sums multiply
    CHECK(ab.sum() == doctest::Approx(a.sum() * b.sum()).epsilon(1e-12));
  }
}

TEST_CASE("mask constants") {
  const MaskConstants k = mask_constants(bspline_mask(3));
  CHECK(k.l1_norm == doctest::Approx(2.0));
  CHECK(k.moment == doctest::Approx(1.5));
  CHECK(k.max_abs == doctest::Approx(0.75));
  const MaskConstants s = mask_constants(Mask(-1, {-1.0, 0.0, 3.0}));
  CHECK(s.l1_norm == 4.0);
  CHECK(s.moment == 4.0);
  CHECK(s.max_abs == 3.0);
}

TEST_CASE("invariance predicates") {
  CHECK(Mask(0, {0.5, 0.5}).is_decimation_invariant());
  CHECK_FALSE(Mask(0, {0.5, 0.4}).is_decimation_invariant());
  CHECK_FALSE(Mask(0, {1.0, 0.5, 0.5}).is_subdivision_invariant());
  CHECK(Mask(0, {1.0, 0.5, 0.5}).parity_sum(0) == 1.5);
  CHECK(Mask(0, {1.0, 0.5, 0.5}).parity_sum(1) == 0.5);
}
