#include <doctest.h>

#include <cmath>
#include <random>

#include "mmr/applications.hpp"
#include "mmr/decimation.hpp"
#include "mmr/linear_pyramid.hpp"
#include "mmr/manifold_pyramid.hpp"
#include "support.hpp"

using namespace mmr;

namespace {

ManifoldSequence<Euclidean> lift(const Sequence& s) {
  ManifoldSequence<Euclidean> out;
  for (double x : s) out.push_back(Eigen::VectorXd::Constant(1, x));
  return out;
}

}  // namespace

TEST_CASE("euclidean operators reduce to the linear ones") {
  std::mt19937_64 rng(1);
  const Euclidean e(1);
  for (int order : {2, 3}) {
    const Mask a = bspline_mask(order);
    const Mask z = decimation_masks(a, order == 3 ? 1e-5 : 1e-4).zeta;
    const Sequence c = testing::random_vector(rng, 64);
    const auto ts = t_subdivide(e, a, lift(c));
    const Sequence ls = subdivide(a, c);
    for (std::size_t k = 0; k < ls.size(); ++k) CHECK(std::abs(ts[k][0] - ls[k]) <= 1e-10);
    const auto yd = y_decimate(e, z, lift(c));
    const Sequence ld = decimate(z, c);
    for (std::size_t k = 0; k < ld.size(); ++k) CHECK(std::abs(yd[k][0] - ld[k]) <= 1e-10);

    const auto mp = m_analyze(e, a, z, lift(c), 3);
    const LinearPyramid lp = analyze(a, z, c, 3);
    for (std::size_t k = 0; k < lp.coarse.size(); ++k) CHECK(std::abs(mp.coarse[k][0] - lp.coarse[k]) <= 1e-9);
    for (std::size_t l = 0; l < 3; ++l) {
      for (std::size_t k = 0; k < lp.details[l].size(); ++k) CHECK(std::abs(mp.details[l][k].vec[0] - lp.details[l][k]) <= 1e-9);
    }
  }
}

TEST_CASE("decimation by delta is even downsampling") {
  std::mt19937_64 rng(2);
  const Sphere s;
  const auto c = testing::random_sphere_curve(rng, 32);
  const auto y = y_decimate(s, Mask::delta(), c);
  for (std::size_t k = 0; k < y.size(); ++k) CHECK((y[k] - c[2 * k]).norm() == 0.0);
}

TEST_CASE("constant sequences give constant refinements and zero pyramids") {
  const Sphere s;
  const Eigen::Vector3d p = Eigen::Vector3d(1, 2, 3).normalized();
  const ManifoldSequence<Sphere> c(32, p);
  const Mask a = bspline_mask(3);
  const Mask z = decimation_masks(a, 1e-5).zeta;
  for (const auto& x : t_subdivide(s, a, c)) CHECK((x - p).norm() <= 1e-15);
  for (const auto& x : y_decimate(s, z, c)) CHECK((x - p).norm() <= 1e-15);
  const auto py = m_analyze(s, a, z, c, 3);
  for (const auto& layer : py.details) CHECK(layer_max(s, layer) <= 1e-15);
  const SafetyConstants k = safety_constants(s, a, z, c);
  CHECK(k.degenerate);
  CHECK(k.e_t == 0.0);
}

TEST_CASE("quadratic refinement of two sphere points cuts corners at 1/4 and 3/4") {
  const Sphere s;
  const Eigen::Vector3d p(1, 0, 0), q = Eigen::Vector3d(1, 0.3, 0.1).normalized();
  const auto out = t_subdivide(s, bspline_mask(2), ManifoldSequence<Sphere>{p, q});
  const auto along = [&](double t) { return s.exp(p, t * s.log(p, q)); };
  CHECK(s.distance(out[0], along(0.25)) <= 1e-9);
  CHECK(s.distance(out[2], along(0.75)) <= 1e-9);
}

TEST_CASE("round trip on random smooth curves") {
  std::mt19937_64 rng(4);
  const Mask a = bspline_mask(3);
  const Mask z = decimation_masks(a, 1e-5).zeta;
  const Mask a2 = bspline_mask(2);
  const Mask z2 = decimation_masks(a2, 1e-4).zeta;
  for (int J = 1; J <= 4; ++J) {
    const int n = 16 << J;
    const Sphere s;
    const auto c = testing::random_sphere_curve(rng, n);
    CHECK(mu(s, m_synthesize(s, a, m_analyze(s, a, z, c, J)), c) <= 1e-6);
    const Spd3 m;
    const auto q = testing::random_spd_curve(rng, n);
    CHECK(mu(m, m_synthesize(m, a2, m_analyze(m, a2, z2, q, J)), q) <= 1e-6);
  }
}

TEST_CASE("zero details synthesize the pure refinement") {
  std::mt19937_64 rng(6);
  const Sphere s;
  const Mask a = bspline_mask(3);
  const auto c = testing::random_sphere_curve(rng, 64);
  auto p = m_analyze(s, a, decimation_masks(a, 1e-5).zeta, c, 2);
  p = threshold_pyramid(s, p, 1e9);
  const auto expect = t_subdivide(s, a, t_subdivide(s, a, p.coarse));
  CHECK(mu(s, m_synthesize(s, a, p), expect) <= 1e-12);
}

TEST_CASE("synthesis transports details onto moved predictions") {
  std::mt19937_64 rng(7);
  const Sphere s;
  const Mask a = bspline_mask(3);
  const auto c = testing::random_sphere_curve(rng, 64);
  auto p = m_analyze(s, a, decimation_masks(a, 1e-5).zeta, c, 2);
  // move one coarse point: the stored bases go stale, the output must still be valid
  p.coarse[3] = s.exp(p.coarse[3], s.random_tangent(p.coarse[3], rng) * 0.01);
  const auto out = m_synthesize(s, a, p);
  for (const auto& x : out) CHECK(std::abs(x.norm() - 1.0) <= 1e-12);
  CHECK(mu(s, out, c) < 0.05);
}

TEST_CASE("synthesis rejects details beyond the injectivity radius") {
  const Sphere s;
  const Mask a = bspline_mask(3);
  std::mt19937_64 rng(8);
  const auto c = testing::random_sphere_curve(rng, 32);
  auto p = m_analyze(s, a, decimation_masks(a, 1e-5).zeta, c, 1);
  const auto& d = p.details[0][5];
  p.details[0][5].vec = s.random_tangent(d.base, rng).normalized() * 3.5;
  try {
    m_synthesize(s, a, p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BeyondInjectivity);
    CHECK(std::string(e.what()).find("level 1") != std::string::npos);
    CHECK(std::string(e.what()).find("index 5") != std::string::npos);
  }
}

TEST_CASE("analysis reports spread failures with their location") {
  const Sphere s;
  ManifoldSequence<Sphere> c;
  for (int k = 0; k < 8; ++k) c.emplace_back(std::cos(k * 0.785398), std::sin(k * 0.785398), 0.0);
  const Mask a = bspline_mask(3);
  try {
    m_analyze(s, a, decimation_masks(a, 1e-5).zeta, c, 1);
    FAIL("expected a numerical error");
  } catch (const Error& e) {
    CHECK(is_numerical(e.code()));
    CHECK(std::string(e.what()).find("level 1") != std::string::npos);
  }
  ManifoldSequence<Sphere> bad(4, Eigen::Vector3d(1, 0, 0));
  bad[2] = Eigen::Vector3d(2, 0, 0);
  CHECK_THROWS_AS(m_analyze(s, a, a, bad, 1), Error);
  CHECK_THROWS_AS(m_analyze(s, a, a, ManifoldSequence<Sphere>(6, Eigen::Vector3d(1, 0, 0)), 2), Error);
}

TEST_CASE("safety constants of a linear bump match their closed forms") {
  const Euclidean e(1);
  const Mask a = bspline_mask(3);
  const Mask z = decimation_masks(a, 1e-5).zeta;
  Sequence c(64, 0.0);
  c[20] = 1.0;
  const SafetyConstants k = safety_constants(e, a, z, lift(c));
  // E: |1 - α_0| at the bump, α_{±2} beside it
  CHECK(k.e_t == doctest::Approx(0.25).epsilon(1e-12));
  // F: (Yc)_k - c_2k = ζ_{k-10} - δ_{k,10}
  double f = std::abs(z[0] - 1.0);
  for (int i = z.first_index(); i <= z.last_index(); ++i) {
    if (i != 0) f = std::max(f, std::abs(z[i]));
  }
  CHECK(k.f_y == doctest::Approx(f).epsilon(1e-12));
  // Q: the largest jump of the refined bump, α_{±1} - α_{±2}
  CHECK(k.q_obs == doctest::Approx(0.375).epsilon(1e-12));
  // linear T: μ(Tc, Tc̃) <= ‖α‖_∞-row sum · μ(c, c̃) = 1
  CHECK(k.s_t_est <= 1.0 + 1e-12);
  CHECK(k.s_t_est > 0.5);

  const SafetyConstants i = safety_constants(e, a, Mask::delta(), lift(c));
  CHECK(i.f_y == 0.0);
}

TEST_CASE("detail bound and contraction hold on every level of the flower curve") {
  const Sphere s;
  const Mask a = bspline_mask(3);
  const Mask z = decimation_masks(a, 1e-5).zeta;
  ManifoldSequence<Sphere> c = flower_curve(5, 320);
  const auto p = m_analyze(s, a, z, c, 5);
  for (int l = 5; l >= 1; --l) {
    CAPTURE(l);
    const SafetyConstants k = safety_constants(s, a, z, c);
    const double dc = delta_m(s, c);
    CHECK(layer_max(s, p.details[static_cast<std::size_t>(l - 1)]) <= k.k() * dc);
    const auto coarser = y_decimate(s, z, c);
    CHECK(delta_m(s, coarser) <= 2.0 * k.p() * dc * (1 + 1e-12));
    c = coarser;
  }
}

TEST_CASE("synthesis is stable under nearby inputs") {
  std::mt19937_64 rng(12);
  const Sphere s;
  const Mask a = bspline_mask(3);
  const Mask z = decimation_masks(a, 1e-5).zeta;
  const auto c = testing::random_sphere_curve(rng, 128);
  Rng r2(3);
  ManifoldSequence<Sphere> ct;
  for (const auto& x : c) ct.push_back(s.exp(x, s.random_tangent(x, r2) * 1e-3));
  const int J = 3;
  const auto p = m_analyze(s, a, z, c, J), pt = m_analyze(s, a, z, ct, J);
  double smax = 0.0;
  double rhs = mu(s, p.coarse, pt.coarse);
  ManifoldSequence<Sphere> level = p.coarse;
  for (int l = 0; l < J; ++l) {
    smax = std::max(smax, safety_constants(s, a, z, level).s_t_est);
    rhs += layer_max(s, p.details[static_cast<std::size_t>(l)]) + layer_max(s, pt.details[static_cast<std::size_t>(l)]);
    level = t_subdivide(s, a, level);
  }
  const double L = std::pow(std::max(1.0, smax), J);
  CHECK(mu(s, c, ct) <= L * rhs);
}
