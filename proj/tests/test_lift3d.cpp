#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "normscope/lift3d.hpp"
#include "test_util.hpp"

using namespace normscope;
using normscope::testing::random_spd;

namespace {

constexpr double kPi = std::numbers::pi;

// Solve A x = b for 3×3 A by Cramer's rule.
Vector solve3(const Matrix& a, const Vector& b) {
  auto det = [](const Matrix& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  };
  const double d = det(a);
  Vector x(3);
  for (std::size_t c = 0; c < 3; ++c) {
    Matrix m = a;
    for (std::size_t r = 0; r < 3; ++r) m(r, c) = b[r];
    x[c] = det(m) / d;
  }
  return x;
}

double direction_gap(const Vector& a, const Vector& b) {
  return max_abs_diff(a / reference_length(a), b / reference_length(b));
}

}  // namespace

TEST(RestrictNorm, CoordinatePlanes) {
  Rng rng(1);
  const auto r2 = restrict_norm(NormSpec::p_norm(2, 3), Subspace2D::coordinate(3, 0, 1));
  const auto r1 = restrict_norm(NormSpec::p_norm(1, 3), Subspace2D::coordinate(3, 0, 2));
  for (int i = 0; i < 100; ++i) {
    const Vector x = rng.normal_vector(2);
    EXPECT_NEAR(r2(x), NormSpec::p_norm(2, 2)(x), 1e-12);
    EXPECT_NEAR(r1(x), NormSpec::p_norm(1, 2)(x), 1e-12);
  }
}

TEST(RestrictNorm, SlantedL1Sections) {
  const auto l1 = NormSpec::p_norm(1, 3);
  const Vector b1{0.5, 0.5, 0.0};
  const auto r = restrict_norm(l1, Subspace2D::make(b1, {0, 0, 1}));
  EXPECT_EQ(r(Vector{1, 0}), l1(b1));
  EXPECT_LT(norm_axiom_residuals(r, 500, 2).triangle, 1e-12);
  // The plane x + y + z = 0 cuts the octahedron in a hexagon.
  const auto hex = restrict_norm(l1, Subspace2D::make({1, -1, 0}, {1, 1, -2}));
  EXPECT_FALSE(detect_euclidean_2d(hex).verdict);
  EXPECT_GT(sample_parallelogram(hex, 2000, 1).max_residual, 0.05);
}

TEST(RestrictNorm, QuadraticSectionsAreQuadratic) {
  const Matrix a = random_spd(4, 12);
  const auto sub = Subspace2D::make({1, 2, 0, -1}, {0, 1, 1, 3});
  const auto r = restrict_norm(NormSpec::quadratic(a), sub);
  const auto g = recover_gram(r, 300, 4);
  EXPECT_LT(g.max_model_residual, 1e-9);
  EXPECT_TRUE(g.psd);
  // oracle: Bᵀ A B
  EXPECT_NEAR(g.matrix(0, 1), a.apply(sub.b2)[0] * sub.b1[0] + a.apply(sub.b2)[1] * sub.b1[1] +
                                  a.apply(sub.b2)[2] * sub.b1[2] + a.apply(sub.b2)[3] * sub.b1[3],
              1e-9);
}

TEST(RestrictNorm, Errors) {
  EXPECT_THROW(Subspace2D::make({1, 0, 0}, {2, 0, 0}), Error);
  EXPECT_THROW(Subspace2D::make({1, 0, 0}, {0, 1}), Error);
  EXPECT_THROW(restrict_norm(NormSpec::p_norm(2, 4), Subspace2D::coordinate(3, 0, 1)), Error);
  const auto r = restrict_norm(NormSpec::p_norm(2, 3), Subspace2D::coordinate(3, 0, 1));
  EXPECT_THROW(r(Vector{1, 2, 3}), Error);
}

TEST(SampleSubspaces, Examples) {
  EXPECT_TRUE(sample_subspace_verdicts(NormSpec::p_norm(2, 4), 50, 9).all_euclidean);
  const auto l1 = sample_subspace_verdicts(NormSpec::p_norm(1, 3), 50, 9);
  EXPECT_FALSE(l1.all_euclidean);
  ASSERT_TRUE(l1.worst.has_value());
  EXPECT_GE(l1.worst->detection.max_deviation, 0.05);
  EXPECT_EQ(l1.checked, 53u);
  EXPECT_TRUE(sample_subspace_verdicts(NormSpec::quadratic(random_spd(3, 7)), 50, 9).all_euclidean);
  EXPECT_THROW(sample_subspace_verdicts(NormSpec::p_norm(2, 2), 5, 1), Error);
}

TEST(FindSupportVector, EuclideanCoordinatePlane) {
  const auto n = NormSpec::p_norm(2, 3);
  const auto f = find_support_vector(n, Subspace2D::coordinate(3, 0, 1));
  EXPECT_LT(max_abs_diff(f.e3, Vector{0, 0, 1}), 1e-9);
  EXPECT_LT(f.support_defect, 1e-9);
  EXPECT_NEAR(n(f.e1), 1.0, 1e-8);
  EXPECT_NEAR(n(f.e2), 1.0, 1e-8);
}

TEST(FindSupportVector, EuclideanSlantedPlane) {
  const Vector b1 = Vector{1, 1, 0} / std::sqrt(2.0);
  const auto f = find_support_vector(NormSpec::p_norm(2, 3), Subspace2D::make(b1, {0, 0, 1}));
  EXPECT_LT(direction_gap(f.e3, Vector{1, -1, 0}), 1e-8);
  EXPECT_LT(f.support_defect, 1e-8);
}

TEST(FindSupportVector, QuadraticMatchesLagrangeCondition) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix a = random_spd(3, 300 + s);
    const auto n = NormSpec::quadratic(a);
    const auto f = find_support_vector(n, Subspace2D::coordinate(3, 0, 1));
    // maximize n·x subject to xᵀAx = 1  ⇒  x ∝ A⁻¹ n
    const Vector expect = solve3(a, Vector{0, 0, 1});
    EXPECT_LT(direction_gap(f.e3, expect), 1e-7);
    EXPECT_NEAR(n(f.e3), 1.0, 1e-12);
    EXPECT_LT(f.support_defect, 1e-8);
  }
}

TEST(FindSupportVector, Errors) {
  EXPECT_THROW(find_support_vector(NormSpec::p_norm(4, 3), Subspace2D::coordinate(3, 0, 1)), Error);
  EXPECT_THROW(find_support_vector(NormSpec::p_norm(2, 4), Subspace2D::coordinate(4, 0, 1)), Error);
}

TEST(SphereParam, EuclideanFrames) {
  const auto n = NormSpec::p_norm(2, 3);
  const Frame3D canonical{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, 0.0};
  const auto r = sphere_param_residual(n, canonical, 64, 64);
  EXPECT_LT(r.residual, 1e-9);
  EXPECT_LT(r.section_deviation, 1e-9);

  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto q = NormSpec::quadratic(random_spd(3, 40 + s));
    const auto f = find_support_vector(q, Subspace2D::coordinate(3, 0, 1));
    const auto rq = sphere_param_residual(q, f, 64, 64);
    EXPECT_LT(rq.residual, 1e-6);
    EXPECT_LT(rq.section_deviation, 1e-6);
  }
}

TEST(SphereParam, L4FrameFromCoordinatePlane) {
  const auto n = NormSpec::p_norm(4, 3);
  const auto f = find_support_vector(n, Subspace2D::coordinate(3, 0, 1), {.require_euclidean = false});
  // z/‖x‖₄ is flat to fourth order at the pole, so the maximizer is only
  // located to about eps^(1/4).
  EXPECT_LT(max_abs_diff(f.e3, Vector{0, 0, 1}), 1e-3);
  EXPECT_LT(f.support_defect, 1e-12);
  const auto r = sphere_param_residual(n, f, 64, 64);
  EXPECT_GE(r.residual, 0.1);
  // θ = π/4, φ = π/2 lands on (√2/2, √2/2, 0), whose 4-norm is 2^(−1/4).
  const double at = n(std::sin(kPi / 2) * (std::cos(kPi / 4) * f.e1 + std::sin(kPi / 4) * f.e2) +
                      std::cos(kPi / 2) * f.e3);
  EXPECT_NEAR(at, std::pow(2.0, -0.25), 1e-6);
  EXPECT_GT(r.section_deviation, 0.1);
}

TEST(DetectEuclidean, Examples) {
  const auto v = detect_euclidean(NormSpec::p_norm(2, 4));
  EXPECT_TRUE(v.euclidean);
  ASSERT_TRUE(v.gram.has_value());
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_LT(max_abs_diff(*v.gram, Matrix::identity(4)), 1e-9);

  const Matrix a = random_spd(3, 5);
  const auto q = detect_euclidean(NormSpec::quadratic(a));
  EXPECT_TRUE(q.euclidean);
  EXPECT_LT(max_abs_diff(*q.gram, a), 1e-8);

  const auto l1 = NormSpec::p_norm(1, 3);
  const auto w = detect_euclidean(l1);
  EXPECT_FALSE(w.euclidean);
  EXPECT_FALSE(w.gram.has_value());
  ASSERT_TRUE(w.witness.has_value());
  const auto* cert = std::get_if<ViolationCertificate>(&*w.witness);
  ASSERT_NE(cert, nullptr);
  EXPECT_TRUE(witness_holds(l1, *w.witness, w.tolerances));
  // the certificate lives in a coordinate plane
  for (const Vector* x : {&cert->quadruple.v1, &cert->quadruple.w1, &cert->quadruple.v2, &cert->quadruple.w2}) {
    int zeros = 0;
    for (double c : *x) zeros += c == 0.0;
    EXPECT_GE(zeros, 1);
  }
}

TEST(DetectEuclidean, LowDimensionsAndLimits) {
  const auto one = detect_euclidean(NormSpec::p_norm(1, 1));
  EXPECT_TRUE(one.euclidean);
  EXPECT_EQ(one.gram->n, 1u);
  const auto two = detect_euclidean(NormSpec::p_infinity(2));
  EXPECT_FALSE(two.euclidean);
  EXPECT_TRUE(witness_holds(NormSpec::p_infinity(2), *two.witness, two.tolerances));
  EXPECT_THROW(detect_euclidean(NormSpec::p_norm(2, 9)), Error);
  EXPECT_NO_THROW(detect_euclidean(NormSpec::p_norm(2, 9), {.max_dim = 9}));
}

TEST(DetectEuclidean, Deterministic) {
  for (const auto& n : {NormSpec::p_norm(1.5, 3), NormSpec::weighted(4, {1, 2, 3})}) {
    const auto a = detect_euclidean(n, {.seed = 3}), b = detect_euclidean(n, {.seed = 3});
    EXPECT_EQ(a, b);
  }
}

TEST(DetectEuclidean, WitnessKindsRecheck) {
  const auto l1 = NormSpec::p_norm(1, 3);
  const auto ax = axiom_residuals(l1, 10, 1);
  const Witness triple = FailingTriple{ax.worst_additivity, ax.additivity};
  EXPECT_TRUE(witness_holds(l1, triple, {}));
  EXPECT_FALSE(witness_holds(NormSpec::p_norm(2, 3), triple, {}));

  const auto sub = Subspace2D::coordinate(3, 0, 1);
  const auto det = detect_euclidean_2d(restrict_norm(l1, sub));
  const Witness section = FailingSection{sub, sub.to_ambient(det.basis.e1), sub.to_ambient(det.basis.e2),
                                         det.worst_theta, det.max_deviation};
  EXPECT_TRUE(witness_holds(l1, section, {}));
}

TEST(DetectEuclidean, AgreesWithParallelogramSampling) {
  for (const auto& n : {NormSpec::p_norm(1, 3), NormSpec::p_norm(3, 3), NormSpec::p_infinity(4),
                        NormSpec::quadratic(random_spd(3, 1)), NormSpec::quadratic(random_spd(4, 2)),
                        NormSpec::weighted(2, {1, 4, 9}), NormSpec::weighted(1.2, {1, 4, 9})}) {
    const bool detected = detect_euclidean(n).euclidean;
    const bool parallelogram = sample_parallelogram(n, 10000, 3).max_residual < 1e-7;
    EXPECT_EQ(detected, parallelogram);
  }
}
