#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "normscope/aronszajn.hpp"
#include "normscope/geometry2d.hpp"
#include "normscope/polarize.hpp"
#include "test_util.hpp"

using namespace normscope;
using normscope::testing::diamond;
using normscope::testing::hexagon;
using normscope::testing::mat2;
using normscope::testing::random_spd;
using normscope::testing::skew_polygon;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle for a hexagon base pair: fix p off every symmetry axis, scan unit
// directions q for a sign change of ‖p+q‖ − ‖p−q‖, then bisect.
std::pair<Vector, Vector> hexagon_base_pair(const NormSpec& n) {
  const Vector p = gauge_normalize(n, Vector{std::cos(0.3), std::sin(0.3)});
  auto q_at = [&](double t) { return gauge_normalize(n, Vector{std::cos(t), std::sin(t)}); };
  auto f = [&](double t) { const Vector q = q_at(t); return n(p + q) - n(p - q); };
  double lo = 0.3, hi = 0.3;
  for (int k = 1; k < 3600; ++k) {
    const double t = 0.3 + kPi * k / 3600.0;
    if (f(t) <= 0) {
      hi = t;
      lo = 0.3 + kPi * (k - 1) / 3600.0;
      break;
    }
  }
  for (int i = 0; i < 200 && std::abs(f(0.5 * (lo + hi))) > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return {p, q_at(0.5 * (lo + hi))};
}

std::vector<NormSpec> suite() {
  return {NormSpec::p_norm(1, 2),     NormSpec::p_norm(1.5, 2), NormSpec::p_norm(2, 2),
          NormSpec::p_norm(4, 2),     NormSpec::p_infinity(2),  NormSpec::quadratic(random_spd(2, 1)),
          NormSpec::quadratic(random_spd(2, 2)), NormSpec::weighted(2, {1, 5}), hexagon(), diamond(),
          skew_polygon()};
}

bool is_euclidean_family(const NormSpec& n) {
  if (n.as<Quadratic>()) return true;
  if (const auto* p = n.as<PNorm>()) return !p->infinite && p->p == 2.0;
  if (const auto* w = n.as<WeightedPNorm>()) return !w->infinite && w->p == 2.0;
  return false;
}

}  // namespace

TEST(VerifyLattice, SymmetricPNormsSatisfyStar) {
  for (double p : {2.0, 4.0}) {
    const auto n = NormSpec::p_norm(p, 2);
    const auto rep = verify_lattice(n, make_lattice_pair(n, {1, 0}, {0, 1}), 10);
    EXPECT_LT(rep.max_star_residual, 1e-10);
    EXPECT_FALSE(rep.first_failure.has_value());
    EXPECT_FALSE(rep.first_broken.has_value());
  }
}

TEST(VerifyLattice, HexagonBreaksAndLocalizesFirstImplication) {
  const auto n = hexagon();
  const auto [p, q] = hexagon_base_pair(n);
  const auto pair = make_lattice_pair(n, p, q);
  ASSERT_LT(pair.base_residual, 1e-9);

  // direct evaluation over the lattice
  double oracle = 0.0;
  for (long a = -6; a <= 6; ++a)
    for (long b = -6; b <= 6; ++b) oracle = std::max(oracle, std::abs(n(a * p + b * q) - n(a * p - b * q)));
  EXPECT_GT(oracle, 1e-3);

  const auto rep = verify_lattice(n, pair, 6);
  EXPECT_DOUBLE_EQ(rep.max_star_residual, oracle);
  ASSERT_TRUE(rep.first_failure.has_value());
  EXPECT_GT(rep.first_failure->residual, 1e-6);
  ASSERT_TRUE(rep.first_broken.has_value());
  const auto& b = *rep.first_broken;
  EXPECT_LE(b.antecedent, 1e-6);
  EXPECT_GT(b.consequent, 1e-6);
  EXPECT_GT(rep.schema_residuals, 1e-3);

  // A broken first-chain implication is itself an Aronszajn violation:
  // v = ap ± q, w = p.
  if (b.chain == 1) {
    const double a = static_cast<double>(b.a);
    const auto quad = criterion_residuals(n, a * p + q, p, a * p - q, p);
    EXPECT_LE(quad.antecedent_residual(), 1e-6);
    EXPECT_NEAR(quad.diag_plus_gap, b.consequent, 1e-15);
  }
}

TEST(VerifyLattice, MonotoneInMaxN) {
  const auto n = hexagon();
  const auto [p, q] = hexagon_base_pair(n);
  const auto pair = make_lattice_pair(n, p, q);
  double prev = 0.0;
  for (long m = 1; m <= 8; ++m) {
    const auto rep = verify_lattice(n, pair, m);
    EXPECT_GE(rep.max_star_residual, prev);
    prev = rep.max_star_residual;
  }
}

TEST(VerifyLattice, Errors) {
  const auto l2 = NormSpec::p_norm(2, 2);
  EXPECT_THROW(verify_lattice(l2, make_lattice_pair(l2, {1, 0}, {1, 1}), 5), Error);
  EXPECT_THROW(make_lattice_pair(l2, {0, 0}, {1, 1}), Error);
  EXPECT_THROW(make_lattice_pair(NormSpec::p_norm(2, 3), {1, 0, 0}, {0, 1, 0}), Error);
  EXPECT_THROW(verify_lattice(l2, make_lattice_pair(l2, {1, 0}, {0, 1}), 0), Error);
}

TEST(MuIsometry, Examples) {
  for (double p : {2.0, 1.0}) {
    const auto n = NormSpec::p_norm(p, 2);
    EXPECT_LT(mu_isometry_residual(n, make_lattice_pair(n, {1, 0}, {0, 1}), 1000, 5), 1e-10);
  }
  const auto h = hexagon();
  const auto [p, q] = hexagon_base_pair(h);
  EXPECT_GT(mu_isometry_residual(h, make_lattice_pair(h, p, q), 1000, 5), 1e-3);
}

TEST(FindOrthogonalUnit, Examples) {
  for (double p : {2.0, 4.0}) {
    const auto b = find_orthogonal_unit(NormSpec::p_norm(p, 2), {1, 0}, 1e-10);
    EXPECT_LT(max_abs_diff(b.e2, Vector{0, 1}), 1e-8);
  }
  // e1ᵀA x = 0 with xᵀA x = 1 gives x = ±(1, −2)/√3.
  const auto b = find_orthogonal_unit(NormSpec::quadratic(mat2(1, 0.5, 0.5, 1)), {1, 0}, 1e-10);
  const Vector expect = Vector{1, -2} / std::sqrt(3.0);
  EXPECT_LT(std::min(max_abs_diff(b.e2, expect), max_abs_diff(b.e2, -expect)), 1e-7);
}

TEST(FindOrthogonalUnit, BasisInvariantsForRandomE1) {
  Rng rng(8);
  for (const auto& n : suite()) {
    for (int i = 0; i < 20; ++i) {
      const Vector e1 = gauge_normalize(n, rng.normal_vector(2));
      const auto b = find_orthogonal_unit(n, e1);
      EXPECT_NEAR(n(b.e1), 1.0, 1e-10);
      EXPECT_NEAR(n(b.e2), 1.0, 1e-10);
      EXPECT_LE(std::abs(n(b.e1 + b.e2) - n(b.e1 - b.e2)), 1e-8);
      EXPECT_EQ(b.construction_trace.final_f_value, n(b.e1 + b.e2) - n(b.e1 - b.e2));
    }
  }
  EXPECT_THROW(find_orthogonal_unit(NormSpec::p_norm(2, 2), {2, 0}), Error);
}

TEST(IsometryResidual, Examples) {
  const auto std2 = Basis2D::standard();
  EXPECT_LT(isometry_residual(NormSpec::p_norm(2, 2), std2, LinearMap2D::diagonal(1, -1), 1000, 2), 1e-10);
  const auto l4 = NormSpec::p_norm(4, 2);
  EXPECT_LT(isometry_residual(l4, std2, LinearMap2D::rotation(kPi / 2), 1000, 2), 1e-10);
  // (1,0) ↦ (√2/2, √2/2), whose 4-norm is 2^(−1/4)
  EXPECT_NEAR(l4(Vector{std::sqrt(0.5), std::sqrt(0.5)}), std::pow(2.0, -0.25), 1e-15);
  EXPECT_GE(isometry_residual(l4, std2, LinearMap2D::rotation(kPi / 4), 1000, 2), 0.15);
}

TEST(IsometryResidual, RightAngleRotationFromTwoReflections) {
  for (const auto& n : {NormSpec::p_norm(2, 2), NormSpec::quadratic(random_spd(2, 3)),
                        NormSpec::quadratic(mat2(1, 0.5, 0.5, 1)), NormSpec::weighted(2, {1, 9})}) {
    const auto basis = find_orthogonal_unit(n, gauge_normalize(n, Vector{1, 0}));
    const auto axis = LinearMap2D::diagonal(1, -1);
    const auto diag = LinearMap2D::reflection(kPi / 4);
    EXPECT_LT(isometry_residual(n, basis, axis, 1000, 1), 1e-9);
    EXPECT_LT(isometry_residual(n, basis, diag, 1000, 1), 1e-9);
    const auto rho = diag.after(axis);
    EXPECT_NEAR(rho.determinant(), 1.0, 1e-12);
    const auto img = rho.apply(1, 0);
    EXPECT_NEAR(img[0], 0.0, 1e-15);
    EXPECT_NEAR(img[1], 1.0, 1e-15);
    EXPECT_LT(isometry_residual(n, basis, rho, 1000, 1), 1e-9);
  }
}

TEST(IsometryResidual, BisectorReflectionsCarryE1ToEveryUnitVector) {
  Rng rng(19);
  for (const auto& n : {NormSpec::quadratic(random_spd(2, 6)), NormSpec::p_norm(2, 2)}) {
    const auto basis = find_orthogonal_unit(n, gauge_normalize(n, Vector{1, 0}));
    for (int i = 0; i < 20; ++i) {
      const double angle = rng.uniform(0, 2 * kPi);  // u in frame coordinates
      const auto mu = LinearMap2D::reflection(angle / 2);
      EXPECT_NEAR(std::abs(mu.determinant()), 1.0, 1e-10);
      EXPECT_LT(isometry_residual(n, basis, mu, 200, i), 1e-9);
      const auto img = mu.apply(1, 0);
      const Vector u = basis.to_ambient(img[0], img[1]);
      EXPECT_NEAR(n(u), 1.0, 1e-9);
    }
  }
}

TEST(DetectEuclidean2D, Examples) {
  const auto e = detect_euclidean_2d(NormSpec::p_norm(2, 2), 720);
  EXPECT_TRUE(e.verdict);
  EXPECT_LT(e.max_deviation, 1e-10);

  const auto l4 = detect_euclidean_2d(NormSpec::p_norm(4, 2), 720);
  EXPECT_FALSE(l4.verdict);
  EXPECT_GE(l4.max_deviation, 1.0 - std::pow(2.0, -0.25) - 1e-4);
  const double w = std::fmod(l4.worst_theta, kPi / 2);
  EXPECT_NEAR(w, kPi / 4, 1e-3);
  // witness recomputes exactly
  const auto& b = l4.basis;
  EXPECT_EQ(std::abs(NormSpec::p_norm(4, 2)(b.to_ambient(std::cos(l4.worst_theta), std::sin(l4.worst_theta))) - 1.0),
            l4.max_deviation);

  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto q = detect_euclidean_2d(NormSpec::quadratic(random_spd(2, 900 + s)), 720);
    EXPECT_TRUE(q.verdict);
    EXPECT_LT(q.max_deviation, 1e-8);
  }
  EXPECT_THROW(detect_euclidean_2d(NormSpec::p_norm(2, 2), 8), Error);
  EXPECT_THROW(detect_euclidean_2d(NormSpec::p_norm(2, 3), 720), Error);
}

TEST(DetectEuclidean2D, InvariantUnderScalingTheNorm) {
  for (const auto& a : {mat2(1, 0.5, 0.5, 1), random_spd(2, 3)}) {
    for (double c : {0.1, 3.0, 40.0}) {
      Matrix scaled = a;
      for (auto& x : scaled.a) x *= c * c;
      const auto d1 = detect_euclidean_2d(NormSpec::quadratic(a));
      const auto d2 = detect_euclidean_2d(NormSpec::quadratic(scaled));
      EXPECT_EQ(d1.verdict, d2.verdict);
      EXPECT_NEAR(d1.max_deviation, d2.max_deviation, 1e-12);
    }
  }
  const auto w1 = detect_euclidean_2d(NormSpec::weighted(3, {1, 2}));
  const auto w2 = detect_euclidean_2d(NormSpec::weighted(3, {8, 16}));  // c = 2 in p = 3: weights × 2³
  EXPECT_EQ(w1.verdict, w2.verdict);
  EXPECT_NEAR(w1.max_deviation, w2.max_deviation, 1e-12);
}

TEST(DetectEuclidean2D, AgreesWithParallelogramSampling) {
  for (const auto& n : suite()) {
    const bool constancy = detect_euclidean_2d(n).verdict;
    const bool parallelogram = sample_parallelogram(n, 10000, 3).max_residual < 1e-7;
    EXPECT_EQ(constancy, parallelogram);
    EXPECT_EQ(constancy, is_euclidean_family(n));
  }
}
