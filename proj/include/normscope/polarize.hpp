#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "norm.hpp"

namespace normscope {

/// Candidate inner product (‖v+w‖² − ‖v‖² − ‖w‖²)/2. The two subtracted
/// squares are summed first so the value is bit-identical under v <-> w.
template <NormLike N>
double polarize(const N& norm, const Vector& v, const Vector& w) {
  const double s = norm(v + w);
  const double a = norm(v);
  const double b = norm(w);
  return (s * s - (a * a + b * b)) / 2.0;
}

/// |‖v+w‖² + ‖v−w‖² − 2‖v‖² − 2‖w‖²|, the parallelogram identity in squared form.
template <NormLike N>
double parallelogram_residual(const N& norm, const Vector& v, const Vector& w) {
  const double s = norm(v + w);
  const double d = norm(v - w);
  const double a = norm(v);
  const double b = norm(w);
  return std::abs((s * s + d * d) - 2.0 * (a * a + b * b));
}

/// Deterministic probe set: every {-1, 0, 1} pattern on the first
/// min(dim, 3) coordinates (zero excluded), plus the all-ones and the
/// alternating-sign diagonals.
inline std::vector<Vector> adversarial_grid(std::size_t dim) {
  std::vector<Vector> out;
  const std::size_t k = std::min<std::size_t>(dim, 3);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Vector v(dim);
    std::size_t c = code;
    bool nonzero = false;
    for (std::size_t i = 0; i < k; ++i, c /= 3) {
      v[i] = static_cast<double>(c % 3) - 1.0;
      nonzero = nonzero || v[i] != 0.0;
    }
    if (nonzero) out.push_back(std::move(v));
  }
  if (dim > k) {
    Vector ones(dim, 1.0), alt(dim);
    for (std::size_t i = 0; i < dim; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    out.push_back(std::move(ones));
    out.push_back(std::move(alt));
  }
  return out;
}

/// Scalars used by the homogeneity probe before any random ones.
inline constexpr std::array<double, 7> kHomogeneityScalars = {-2.0, -1.0, -0.5, 0.0, 0.5, std::numbers::phi, 2.0};

struct Triple {
  Vector u, v, w;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct AxiomResiduals {
  double additivity = 0.0;
  double homogeneity = 0.0;
  double definiteness = 0.0;
  Triple worst_additivity;  // argmax of the additivity residual

  double max() const { return std::max({additivity, homogeneity, definiteness}); }
};

/// Inner-product axiom defects of the polarization form, sampled over
/// vector triples (every axiom involves at most three vectors). Symmetry
/// holds identically and is not sampled.
template <NormLike N>
AxiomResiduals axiom_residuals(const N& norm, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw Error("axiom_residuals: sample_count must be >= 1");
  const std::size_t dim = norm.dim();
  AxiomResiduals r;
  bool have_worst = false;

  auto additivity = [&](const Vector& u, const Vector& v, const Vector& w) {
    const double d = std::abs(polarize(norm, u + v, w) - (polarize(norm, u, w) + polarize(norm, v, w)));
    if (!have_worst || d > r.additivity) {
      r.additivity = d;
      r.worst_additivity = {u, v, w};
      have_worst = true;
    }
  };
  auto homogeneity = [&](double a, const Vector& v, const Vector& w) {
    r.homogeneity = std::max(r.homogeneity, std::abs(polarize(norm, a * v, w) - a * polarize(norm, v, w)));
  };
  auto definiteness = [&](const Vector& v) {
    if (reference_length(v) > 0.0) r.definiteness = std::max(r.definiteness, kZeroThreshold - polarize(norm, v, v));
  };

  const auto grid = adversarial_grid(dim);
  for (const auto& u : grid) {
    definiteness(u);
    for (const auto& v : grid) {
      for (double a : kHomogeneityScalars) homogeneity(a, u, v);
      for (const auto& w : grid) additivity(u, v, w);
    }
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Vector u = rng.normal_vector(dim);
    const Vector v = rng.normal_vector(dim);
    const Vector w = rng.normal_vector(dim);
    const double a = rng.uniform(-3.0, 3.0);
    additivity(u, v, w);
    homogeneity(a, v, w);
    definiteness(u);
  }
  return r;
}

struct GramResult {
  Matrix matrix;
  bool psd = false;
  double max_model_residual = 0.0;
};

inline constexpr double kPsdMinorThreshold = 1e-10;

/// Gram matrix of the polarization form on the standard basis. The model
/// residual compares ‖x‖² with x^T G x on seeded random unit vectors of the
/// norm, so it is scale free.
template <NormLike N>
GramResult recover_gram(const N& norm, std::size_t probe_count, std::uint64_t seed) {
  if (probe_count < 1) throw Error("recover_gram: probe_count must be >= 1");
  const std::size_t dim = norm.dim();
  GramResult g;
  g.matrix = Matrix(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = polarize(norm, Vector::unit(dim, i), Vector::unit(dim, j));
      g.matrix(i, j) = v;
      g.matrix(j, i) = v;
    }
  }
  const auto minors = leading_principal_minors(g.matrix);
  g.psd = std::all_of(minors.begin(), minors.end(), [](double m) { return m > kPsdMinorThreshold; });

  Rng rng(seed);
  for (std::size_t i = 0; i < probe_count; ++i) {
    Vector x = rng.normal_vector(dim);
    if (!(norm(x) > kZeroThreshold)) continue;
    x = gauge_normalize(norm, x);
    const double n = norm(x);
    g.max_model_residual = std::max(g.max_model_residual, std::abs(n * n - g.matrix.quadratic_form(x)));
  }
  return g;
}

struct ParallelogramSummary {
  double max_residual = 0.0;
  Vector worst_v, worst_w;
  std::size_t pairs_checked = 0;
};

/// Parallelogram residual over the adversarial grid pairs plus seeded random
/// pairs of unit vectors.
template <NormLike N>
ParallelogramSummary sample_parallelogram(const N& norm, std::size_t pair_count, std::uint64_t seed) {
  const std::size_t dim = norm.dim();
  ParallelogramSummary s;
  auto check = [&](const Vector& v, const Vector& w) {
    const double r = parallelogram_residual(norm, v, w);
    if (s.pairs_checked == 0 || r > s.max_residual) {
      s.max_residual = r;
      s.worst_v = v;
      s.worst_w = w;
    }
    ++s.pairs_checked;
  };
  const auto grid = adversarial_grid(dim);
  for (const auto& v : grid)
    for (const auto& w : grid) check(v, w);
  Rng rng(seed);
  for (std::size_t i = 0; i < pair_count; ++i) {
    const Vector v = rng.normal_vector(dim), w = rng.normal_vector(dim);
    if (!(norm(v) > kZeroThreshold) || !(norm(w) > kZeroThreshold)) continue;
    check(gauge_normalize(norm, v), gauge_normalize(norm, w));
  }
  return s;
}

}  // namespace normscope
