#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "nelder_mead.hpp"
#include "norm.hpp"

namespace normscope {

/// Two parallelograms (0, v, v+w, w) compared side by side. The residuals
/// measure how far the pair is from agreeing in ‖v‖, ‖w‖, ‖v−w‖ and ‖v+w‖.
struct AronszajnQuadruple {
  Vector v1, w1, v2, w2;
  double side_v_residual = 0.0;
  double side_w_residual = 0.0;
  double diag_minus_residual = 0.0;
  double diag_plus_gap = 0.0;

  double antecedent_residual() const { return std::max({side_v_residual, side_w_residual, diag_minus_residual}); }
  friend bool operator==(const AronszajnQuadruple&, const AronszajnQuadruple&) = default;
};

template <NormLike N>
AronszajnQuadruple criterion_residuals(const N& norm, const Vector& v1, const Vector& w1, const Vector& v2,
                                       const Vector& w2) {
  AronszajnQuadruple q{v1, w1, v2, w2};
  q.side_v_residual = std::abs(norm(v1) - norm(v2));
  q.side_w_residual = std::abs(norm(w1) - norm(w2));
  q.diag_minus_residual = std::abs(norm(v1 - w1) - norm(v2 - w2));
  q.diag_plus_gap = std::abs(norm(v1 + w1) - norm(v2 + w2));
  return q;
}

/// True iff the quadruple meets the criterion's hypotheses within `eps` but
/// its long diagonals differ by at least `gap_threshold`.
inline bool is_violation(const AronszajnQuadruple& q, double eps, double gap_threshold) {
  return q.side_v_residual <= eps && q.side_w_residual <= eps && q.diag_minus_residual <= eps &&
         q.diag_plus_gap >= gap_threshold;
}

struct SearchTrace {
  std::uint64_t seed = 0;
  std::size_t restarts_used = 0;
  std::size_t objective_evals = 0;
  friend bool operator==(const SearchTrace&, const SearchTrace&) = default;
};

struct ViolationCertificate {
  AronszajnQuadruple quadruple;
  double eps_used = 0.0;
  double gap_threshold_used = 0.0;
  SearchTrace search_trace;
  friend bool operator==(const ViolationCertificate&, const ViolationCertificate&) = default;
};

struct SearchConfig {
  std::size_t restarts = 200;
  std::size_t max_iters = 400;
  double eps = 1e-8;
  double gap_threshold = 0.05;
  double penalty = 100.0;
  std::uint64_t seed = 0;
};

/// Recomputes every residual from the raw vectors and re-applies the test.
template <NormLike N>
bool certificate_holds(const N& norm, const ViolationCertificate& c) {
  const auto& q = c.quadruple;
  return is_violation(criterion_residuals(norm, q.v1, q.w1, q.v2, q.w2), c.eps_used, c.gap_threshold_used);
}

namespace detail {

// Side length of the w vectors, mapped from an unconstrained parameter onto [0.1, 1].
inline double side_scale(double t) { return 0.55 + 0.45 * std::sin(t); }

struct QuadrupleParams {
  double alpha1, beta1, t, alpha2, beta2;
};

template <NormLike N>
AronszajnQuadruple quadruple_at(const N& norm, const QuadrupleParams& p) {
  const double s = side_scale(p.t);
  return criterion_residuals(norm, unit_direction(norm, p.alpha1), s * unit_direction(norm, p.beta1),
                             unit_direction(norm, p.alpha2), s * unit_direction(norm, p.beta2));
}

// Moves beta2 to the nearest root of ‖v2 − w2(beta2)‖ − ‖v1 − w1‖, keeping
// ‖w2‖ fixed. A root always exists: over the circle the left term sweeps
// [1 − s, 1 + s], which contains the target.
template <NormLike N>
QuadrupleParams polish_diagonal(const N& norm, QuadrupleParams p, double eps) {
  const double s = side_scale(p.t);
  const double target = norm(unit_direction(norm, p.alpha1) - s * unit_direction(norm, p.beta1));
  const Vector v2 = unit_direction(norm, p.alpha2);
  auto h = [&](double beta) { return norm(v2 - s * unit_direction(norm, beta)) - target; };

  const double h0 = h(p.beta2);
  if (std::abs(h0) <= eps / 4) return p;
  double lo = p.beta2, hi = p.beta2;
  bool found = false;
  for (double step = 1e-4; step <= std::numbers::pi && !found; step *= 1.5) {
    for (double dir : {1.0, -1.0}) {
      const double b = p.beta2 + dir * step;
      if ((h(b) > 0) != (h0 > 0)) {
        lo = p.beta2;
        hi = b;
        found = true;
        break;
      }
    }
  }
  if (!found) return p;
  double hlo = h0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (std::abs(hm) <= eps / 4) {
      lo = hi = mid;
      break;
    }
    if ((hm > 0) == (hlo > 0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  p.beta2 = 0.5 * (lo + hi);
  return p;
}

}  // namespace detail

/// Multistart Nelder–Mead search for a quadruple that violates the
/// criterion in a 2D norm. v1, v2 are unit vectors and w1, w2 share the
/// length s, so both side equalities hold by construction; the search
/// trades the long-diagonal gap against the short-diagonal mismatch and
/// then closes the mismatch exactly by bisection on the direction of w2.
///
/// Restarts run in index order and the first success is returned, so the
/// result depends only on (norm, config).
template <NormLike N>
std::optional<ViolationCertificate> search_violation(const N& norm, const SearchConfig& config) {
  if (norm.dim() != 2) throw Error("search_violation: needs a 2D norm (restrict to a subspace first)");
  if (config.restarts < 1) throw Error("search_violation: restarts must be >= 1");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kDegenerate = 1e-6;

  std::size_t evals = 0;
  auto objective = [&](const std::vector<double>& x) {
    const detail::QuadrupleParams p{x[0], x[1], x[2], x[3], x[4]};
    const auto q = detail::quadruple_at(norm, p);
    if (norm(q.v1 - q.w1) < kDegenerate) return 1e3;
    return -(q.diag_plus_gap - config.penalty * q.diag_minus_residual * q.diag_minus_residual);
  };

  for (std::size_t r = 0; r < config.restarts; ++r) {
    Rng rng(Rng::derive(config.seed, r));
    std::vector<double> x0 = {rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi),
                              rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    SimplexOptions opt;
    opt.max_iters = config.max_iters;
    const auto res = nelder_mead(objective, x0, opt);
    evals += res.evaluations;

    auto p = detail::polish_diagonal(norm, {res.x[0], res.x[1], res.x[2], res.x[3], res.x[4]}, config.eps);
    const auto q = detail::quadruple_at(norm, p);
    if (norm(q.v1 - q.w1) < kDegenerate) continue;
    if (is_violation(q, config.eps, config.gap_threshold)) {
      ViolationCertificate c{q, config.eps, config.gap_threshold, {config.seed, r + 1, evals}};
      if (certificate_holds(norm, c)) return c;
    }
  }
  return std::nullopt;
}

}  // namespace normscope
