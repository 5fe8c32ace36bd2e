#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include "norm.hpp"

namespace normscope {

/// Nonzero p, q of a 2D norm, with |‖p+q‖ − ‖p−q‖| cached.
struct LatticePair {
  Vector p, q;
  double base_residual = 0.0;
};

inline constexpr double kLatticeBaseTolerance = 1e-8;
inline constexpr double kLatticeFailure = 1e-6;

template <NormLike N>
LatticePair make_lattice_pair(const N& norm, const Vector& p, const Vector& q) {
  if (norm.dim() != 2) throw Error("lattice pair: needs a 2D norm");
  const double np = norm(p), nq = norm(q);
  if (!(np > kZeroThreshold) || !(nq > kZeroThreshold)) throw Error("lattice pair: p and q must be nonzero");
  LatticePair pair{p, q, std::abs(norm(p + q) - norm(p - q))};
  if (pair.base_residual <= kLatticeBaseTolerance) {
    const double det = (p[0] * q[1] - p[1] * q[0]) / (np * nq);
    if (!(std::abs(det) > 1e-10)) throw Error("lattice pair: p and q are linearly dependent");
  }
  return pair;
}

struct LatticePoint {
  long a = 0, b = 0;
  double residual = 0.0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// One implication of the induction: from (*) at `from` and `prev` conclude
/// (*) at `to`. The first chain walks a with b = 1, the second walks b.
struct SchemaInstance {
  int chain = 0;
  long a = 0, b = 0;  // the instance's current point
  double antecedent = 0.0;
  double consequent = 0.0;
};

struct LatticeReport {
  double max_star_residual = 0.0;
  std::optional<LatticePoint> first_failure;  // smallest max(|a|, |b|), scan order on ties
  double schema_residuals = 0.0;
  std::optional<SchemaInstance> first_broken;
};

/// Checks ‖ap + bq‖ = ‖ap − bq‖ on the integer square [−maxN, maxN]² and
/// replays the two induction chains that extend it from the base case
/// a = b = 1, reporting the first implication whose premises hold but whose
/// conclusion does not.
template <NormLike N>
LatticeReport verify_lattice(const N& norm, const LatticePair& pair, long max_n) {
  if (pair.base_residual > kLatticeBaseTolerance)
    throw Error("verify_lattice: base pair does not satisfy ‖p+q‖ = ‖p−q‖");
  if (max_n < 1) throw Error("verify_lattice: maxN must be >= 1");
  auto star = [&](long a, long b) {
    const double da = static_cast<double>(a), db = static_cast<double>(b);
    return std::abs(norm(da * pair.p + db * pair.q) - norm(da * pair.p - db * pair.q));
  };

  auto ring = [](long a, long b) { return std::max(std::abs(a), std::abs(b)); };
  LatticeReport rep;
  for (long a = -max_n; a <= max_n; ++a) {
    for (long b = -max_n; b <= max_n; ++b) {
      const double r = star(a, b);
      rep.max_star_residual = std::max(rep.max_star_residual, r);
      if (r > kLatticeFailure && (!rep.first_failure || ring(a, b) < ring(rep.first_failure->a, rep.first_failure->b)))
        rep.first_failure = LatticePoint{a, b, r};
    }
  }

  auto instance = [&](int chain, long a, long b, double antecedent, double consequent) {
    rep.schema_residuals = std::max(rep.schema_residuals, consequent - antecedent);
    if (!rep.first_broken && antecedent <= kLatticeFailure && consequent > kLatticeFailure)
      rep.first_broken = SchemaInstance{chain, a, b, antecedent, consequent};
  };
  // ‖ap+q‖=‖ap−q‖ ∧ ‖p‖=‖p‖ ∧ ‖(a−1)p+q‖=‖(a−1)p−q‖ ⇒ ‖(a+1)p+q‖=‖(a+1)p−q‖
  for (long a = 1; a < max_n; ++a) instance(1, a, 1, std::max(star(a, 1), star(a - 1, 1)), star(a + 1, 1));
  // ‖ap+bq‖=‖ap−bq‖ ∧ ‖q‖=‖−q‖ ∧ ‖ap+(b−1)q‖=‖ap−(b−1)q‖ ⇒ ‖ap+(b+1)q‖=‖ap−(b+1)q‖
  for (long a = 1; a <= max_n; ++a)
    for (long b = 1; b < max_n; ++b) instance(2, a, b, std::max(star(a, b), star(a, b - 1)), star(a, b + 1));
  return rep;
}

/// max over random real (a, b) in [−3, 3]² of |‖ap + bq‖ − ‖ap − bq‖|:
/// how far ap + bq ↦ ap − bq is from being an isometry.
template <NormLike N>
double mu_isometry_residual(const N& norm, const LatticePair& pair, std::size_t sample_count, std::uint64_t seed) {
  if (pair.base_residual > kLatticeBaseTolerance)
    throw Error("mu_isometry_residual: base pair does not satisfy ‖p+q‖ = ‖p−q‖");
  Rng rng(seed);
  double m = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    m = std::max(m, std::abs(norm(a * pair.p + b * pair.q) - norm(a * pair.p - b * pair.q)));
  }
  return m;
}

struct BisectionTrace {
  std::size_t bisection_iters = 0;
  double final_f_value = 0.0;
  double root_t = 0.0;
};

/// Unit vectors e1, e2 with ‖e1 + e2‖ = ‖e1 − e2‖. Coordinates (a, b)
/// relative to the pair map to a·e1 + b·e2.
struct Basis2D {
  Vector e1, e2;
  BisectionTrace construction_trace;

  static Basis2D standard() { return {{1.0, 0.0}, {0.0, 1.0}, {}}; }

  Vector to_ambient(double a, double b) const { return a * e1 + b * e2; }
};

/// 2×2 matrix acting on frame coordinates, row-major.
struct LinearMap2D {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  /// Reflection in the line through the origin at angle `phi`.
  static LinearMap2D reflection(double phi) {
    const double c = std::cos(2 * phi), s = std::sin(2 * phi);
    return {{c, s, s, -c}};
  }
  static LinearMap2D rotation(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {{c, -s, s, c}};
  }
  static LinearMap2D diagonal(double d0, double d1) { return {{d0, 0.0, 0.0, d1}}; }

  /// this ∘ other
  LinearMap2D after(const LinearMap2D& o) const {
    return {{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3], m[2] * o.m[0] + m[3] * o.m[2],
             m[2] * o.m[1] + m[3] * o.m[3]}};
  }
  double determinant() const { return m[0] * m[3] - m[1] * m[2]; }
  std::array<double, 2> apply(double a, double b) const { return {m[0] * a + m[1] * b, m[2] * a + m[3] * b}; }
};

/// Walks x(t) = unit(cos t·e1 + sin t·e1⊥) from e1 (t = 0) to −e1 (t = π).
/// f(t) = ‖e1 + x(t)‖ − ‖e1 − x(t)‖ runs from 2 down to −2, so bisection on
/// its sign always converges to a root; that root is e2.
template <NormLike N>
Basis2D find_orthogonal_unit(const N& norm, const Vector& e1, double tol = 1e-12) {
  if (norm.dim() != 2) throw Error("find_orthogonal_unit: needs a 2D norm");
  if (std::abs(norm(e1) - 1.0) > 1e-10) throw Error("find_orthogonal_unit: e1 must be a unit vector");
  if (!(tol > 0.0)) throw Error("find_orthogonal_unit: tol must be positive");
  const Vector perp{-e1[1], e1[0]};
  auto x_at = [&](double t) { return gauge_normalize(norm, std::cos(t) * e1 + std::sin(t) * perp); };
  auto f = [&](const Vector& x) { return norm(e1 + x) - norm(e1 - x); };

  double lo = 0.0, hi = std::numbers::pi;  // f(lo) = 2, f(hi) = −2
  BisectionTrace trace;
  double t = 0.5 * (lo + hi);
  Vector x = x_at(t);
  double fx = f(x);
  while (std::abs(fx) > tol && trace.bisection_iters < 200) {
    if (fx > 0)
      lo = t;
    else
      hi = t;
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    t = next;
    x = x_at(t);
    fx = f(x);
    ++trace.bisection_iters;
  }
  trace.final_f_value = fx;
  trace.root_t = t;
  return {e1, x, trace};
}

/// max |‖map(x)‖ − ‖x‖| over random unit vectors x, with `map` acting in
/// the basis's frame coordinates.
template <NormLike N>
double isometry_residual(const N& norm, const Basis2D& basis, const LinearMap2D& map, std::size_t sample_count,
                         std::uint64_t seed) {
  if (sample_count < 1) throw Error("isometry_residual: sample_count must be >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = norm(basis.to_ambient(std::cos(t), std::sin(t)));
    const double a = std::cos(t) / r, b = std::sin(t) / r;
    const auto img = map.apply(a, b);
    worst = std::max(worst, std::abs(norm(basis.to_ambient(img[0], img[1])) - norm(basis.to_ambient(a, b))));
  }
  return worst;
}

inline constexpr double kConstancyTolerance = 1e-7;

struct Detection2D {
  bool verdict = false;
  double max_deviation = 0.0;
  double worst_theta = 0.0;
  Basis2D basis;
};

/// Constancy of g(θ) = ‖cos θ·e1 + sin θ·e2‖ on [0, π), with e1 = unit((1,0))
/// and e2 from find_orthogonal_unit. The norm is euclidean iff g ≡ 1; a
/// true verdict holds at grid resolution only. The worst grid cell is
/// sharpened by golden-section search.
template <NormLike N>
Detection2D detect_euclidean_2d(const N& norm, std::size_t theta_samples = 720) {
  if (norm.dim() != 2) throw Error("detect_euclidean_2d: needs a 2D norm");
  if (theta_samples < 16) throw Error("detect_euclidean_2d: theta_samples must be >= 16");
  Detection2D d;
  d.basis = find_orthogonal_unit(norm, gauge_normalize(norm, Vector{1.0, 0.0}));
  auto dev = [&](double th) { return std::abs(norm(d.basis.to_ambient(std::cos(th), std::sin(th))) - 1.0); };

  const double step = std::numbers::pi / static_cast<double>(theta_samples);
  std::size_t worst = 0;
  for (std::size_t k = 0; k < theta_samples; ++k) {
    const double v = dev(static_cast<double>(k) * step);
    if (v > d.max_deviation) {
      d.max_deviation = v;
      worst = k;
    }
  }
  d.worst_theta = static_cast<double>(worst) * step;

  const double inv_phi = 1.0 / std::numbers::phi;
  double lo = d.worst_theta - step, hi = d.worst_theta + step;
  double c = hi - inv_phi * (hi - lo), e = lo + inv_phi * (hi - lo);
  double fc = dev(c), fe = dev(e);
  for (int i = 0; i < 80; ++i) {
    if (fc > fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - inv_phi * (hi - lo);
      fc = dev(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + inv_phi * (hi - lo);
      fe = dev(e);
    }
  }
  double refined = 0.5 * (lo + hi);
  if (refined < 0.0) refined += std::numbers::pi;  // g(θ + π) = g(θ)
  if (refined >= std::numbers::pi) refined -= std::numbers::pi;
  const double refined_dev = dev(refined);
  if (refined_dev > d.max_deviation) {
    d.max_deviation = refined_dev;
    d.worst_theta = refined;
  }
  d.verdict = d.max_deviation <= kConstancyTolerance;
  return d;
}

}  // namespace normscope
