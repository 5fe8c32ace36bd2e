#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "rng.hpp"
#include "vector.hpp"

namespace normscope {

/// Anything that evaluates a norm on vectors of a fixed dimension.
template <class N>
concept NormLike = requires(const N& n, const Vector& x) {
  { n.dim() } -> std::convertible_to<std::size_t>;
  { n(x) } -> std::convertible_to<double>;
};

/// (sum |x_i|^p)^(1/p), or max |x_i| when `infinite` is set.
struct PNorm {
  double p = 2.0;
  bool infinite = false;
  friend bool operator==(const PNorm&, const PNorm&) = default;
};

/// (sum w_i |x_i|^p)^(1/p), or max w_i |x_i| when `infinite` is set.
struct WeightedPNorm {
  double p = 2.0;
  bool infinite = false;
  std::vector<double> weights;
  friend bool operator==(const WeightedPNorm&, const WeightedPNorm&) = default;
};

/// sqrt(x^T A x) for symmetric positive-definite A.
struct Quadratic {
  Matrix a;
  friend bool operator==(const Quadratic&, const Quadratic&) = default;
};

using Point2 = std::array<double, 2>;

/// Gauge of the convex hull of a centrally symmetric planar point set.
///
/// Each hull edge lies on a line {y : n.y = 1}; with the origin strictly
/// inside, the smallest t with x/t in the hull is where the ray through x
/// leaves the polygon, i.e. max over edges of n.x.
struct PolytopeGauge2D {
  std::vector<Point2> generators;  // as supplied, before symmetrization
  std::vector<Point2> hull;        // counter-clockwise, symmetric
  std::vector<Point2> facets;      // scaled outward normals, closed under negation
  friend bool operator==(const PolytopeGauge2D& a, const PolytopeGauge2D& b) {
    return a.generators == b.generators;
  }
};

namespace detail {

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; collinear points are dropped.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline double p_sum(const Vector& x, double p, const std::vector<double>* w) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]));
  if (m == 0.0) return 0.0;
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (w ? (*w)[i] : 1.0) * std::abs(x[i]);
    return s;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i] / m;
      s += (w ? (*w)[i] : 1.0) * r * r;
    }
    return m * std::sqrt(s);
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (w ? (*w)[i] : 1.0) * std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace detail

/// Tagged description of a norm on R^dim.
class NormSpec {
public:
  using Family = std::variant<PNorm, WeightedPNorm, Quadratic, PolytopeGauge2D>;

  static NormSpec p_norm(double p, std::size_t dim) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("p-norm needs finite p >= 1 (use p_infinity for p = inf)");
    return NormSpec(PNorm{p, false}, dim);
  }

  static NormSpec p_infinity(std::size_t dim) { return NormSpec(PNorm{0.0, true}, dim); }

  static NormSpec weighted(double p, std::vector<double> weights) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("weighted p-norm needs finite p >= 1");
    const auto dim = weights.size();
    return NormSpec(WeightedPNorm{p, false, std::move(weights)}, dim);
  }

  static NormSpec weighted_infinity(std::vector<double> weights) {
    const auto dim = weights.size();
    return NormSpec(WeightedPNorm{0.0, true, std::move(weights)}, dim);
  }

  static NormSpec quadratic(Matrix a) {
    const auto dim = a.n;
    return NormSpec(Quadratic{std::move(a)}, dim);
  }

  /// The hull of the generators together with their negatives.
  static NormSpec polytope(std::vector<Point2> generators) {
    PolytopeGauge2D g;
    g.generators = generators;
    std::vector<Point2> pts;
    for (const auto& v : generators) {
      if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw Error("polytope vertex is not finite");
      pts.push_back(v);
      pts.push_back({-v[0], -v[1]});
    }
    g.hull = detail::convex_hull(std::move(pts));
    if (g.hull.size() < 3) throw Error("polytope gauge: hull is degenerate (origin not strictly inside)");
    for (std::size_t i = 0; i < g.hull.size(); ++i) {
      const auto& a = g.hull[i];
      const auto& b = g.hull[(i + 1) % g.hull.size()];
      const double nx = b[1] - a[1], ny = a[0] - b[0];
      const double h = nx * a[0] + ny * a[1];
      const double scale = std::hypot(nx, ny) * std::max(std::hypot(a[0], a[1]), std::hypot(b[0], b[1]));
      if (!(h > 1e-12 * scale)) throw Error("polytope gauge: origin not strictly inside the hull");
      g.facets.push_back({nx / h, ny / h});
    }
    const auto n = g.facets.size();
    for (std::size_t i = 0; i < n; ++i) g.facets.push_back({-g.facets[i][0], -g.facets[i][1]});
    return NormSpec(std::move(g), 2);
  }

  std::size_t dim() const noexcept { return dim_; }
  const Family& family() const noexcept { return family_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&family_);
  }

  double operator()(const Vector& x) const {
    if (x.size() != dim_)
      throw Error("eval_norm: vector has dimension " + std::to_string(x.size()) + ", norm expects " +
                  std::to_string(dim_));
    if (!x.all_finite()) throw Error("eval_norm: non-finite coordinate");
    return std::visit([&](const auto& f) { return evaluate(f, x); }, family_);
  }

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

private:
  NormSpec(Family f, std::size_t dim) : family_(std::move(f)), dim_(dim) { validate(); }

  void validate() const {
    if (dim_ < 1) throw Error("norm dimension must be at least 1");
    if (const auto* w = as<WeightedPNorm>()) {
      for (double x : w->weights)
        if (!(x > 0.0) || !std::isfinite(x)) throw Error("weighted p-norm: weights must be positive and finite");
    }
    if (const auto* q = as<Quadratic>()) {
      const Matrix& a = q->a;
      for (double x : a.a)
        if (!std::isfinite(x)) throw Error("quadratic norm: non-finite matrix entry");
      for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (std::abs(a(i, j) - a(j, i)) > 1e-12) throw Error("quadratic norm: matrix is not symmetric");
      for (double m : leading_principal_minors(a))
        if (!(m > 0.0)) throw Error("quadratic norm: matrix is not positive definite");
    }
  }

  static double evaluate(const PNorm& f, const Vector& x) {
    if (f.infinite) {
      double m = 0.0;
      for (double c : x) m = std::max(m, std::abs(c));
      return m;
    }
    return detail::p_sum(x, f.p, nullptr);
  }

  static double evaluate(const WeightedPNorm& f, const Vector& x) {
    if (f.infinite) {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, f.weights[i] * std::abs(x[i]));
      return m;
    }
    return detail::p_sum(x, f.p, &f.weights);
  }

  static double evaluate(const Quadratic& f, const Vector& x) {
    return std::sqrt(std::max(0.0, f.a.quadratic_form(x)));
  }

  static double evaluate(const PolytopeGauge2D& f, const Vector& x) {
    double m = 0.0;
    for (const auto& n : f.facets) m = std::max(m, n[0] * x[0] + n[1] * x[1]);
    return m;
  }

  Family family_;
  std::size_t dim_ = 0;
};

template <NormLike N>
double eval_norm(const N& norm, const Vector& x) {
  return norm(x);
}

/// x scaled onto the unit sphere of `norm`.
template <NormLike N>
Vector gauge_normalize(const N& norm, const Vector& x) {
  const double r = norm(x);
  if (!(r > kZeroThreshold)) throw Error("gauge_normalize: vector is (numerically) zero");
  return x / r;
}

/// Unit vector of `norm` in the direction (cos t, sin t) of a 2D norm.
template <NormLike N>
Vector unit_direction(const N& norm, double t) {
  return gauge_normalize(norm, Vector{std::cos(t), std::sin(t)});
}

struct NormAxiomResiduals {
  double homogeneity = 0.0;
  double triangle = 0.0;
  double positivity = 0.0;
  friend bool operator==(const NormAxiomResiduals&, const NormAxiomResiduals&) = default;
};

template <NormLike N>
NormAxiomResiduals norm_axiom_residuals(const N& norm, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw Error("norm_axiom_residuals: sample_count must be >= 1");
  Rng rng(seed);
  NormAxiomResiduals r;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Vector x = rng.normal_vector(norm.dim());
    const Vector y = rng.normal_vector(norm.dim());
    const double a = rng.uniform(-3.0, 3.0);
    const double nx = norm(x);
    r.homogeneity = std::max(r.homogeneity, std::abs(norm(a * x) - std::abs(a) * nx));
    r.triangle = std::max(r.triangle, norm(x + y) - nx - norm(y));
    if (reference_length(x) > 0.0) r.positivity = std::max(r.positivity, kZeroThreshold - nx);
  }
  return r;
}

/// |‖(j/k)p + (m/n)q‖ - |1/(kn)|·‖jn·p + km·q‖|. Homogeneity makes this
/// float noise for every norm.
template <NormLike N>
double rational_scaling_check(const N& norm, const Vector& p, const Vector& q, std::int64_t j, std::int64_t k,
                              std::int64_t m, std::int64_t n) {
  if (k == 0 || n == 0) throw Error("rational_scaling_check: denominators must be nonzero");
  const double lhs = norm((static_cast<double>(j) / static_cast<double>(k)) * p +
                          (static_cast<double>(m) / static_cast<double>(n)) * q);
  const double kn = static_cast<double>(k) * static_cast<double>(n);
  const double rhs = std::abs(1.0 / kn) * norm(static_cast<double>(j * n) * p + static_cast<double>(k * m) * q);
  return std::abs(lhs - rhs);
}

}  // namespace normscope
