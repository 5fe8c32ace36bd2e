#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "aronszajn.hpp"
#include "geometry2d.hpp"
#include "nelder_mead.hpp"
#include "polarize.hpp"

namespace normscope {

/// span{b1, b2} inside the ambient space.
struct Subspace2D {
  std::size_t ambient_dim = 0;
  Vector b1, b2;

  static Subspace2D make(Vector b1, Vector b2) {
    if (b1.size() != b2.size()) throw Error("subspace: basis vectors differ in dimension");
    const double g = dot(b1, b1) * dot(b2, b2) - dot(b1, b2) * dot(b1, b2);
    if (!(g > 1e-10)) throw Error("subspace: basis vectors are linearly dependent");
    const auto d = b1.size();
    return {d, std::move(b1), std::move(b2)};
  }

  static Subspace2D coordinate(std::size_t dim, std::size_t i, std::size_t j) {
    return make(Vector::unit(dim, i), Vector::unit(dim, j));
  }

  Vector to_ambient(double a, double b) const { return a * b1 + b * b2; }
  Vector to_ambient(const Vector& ab) const { return to_ambient(ab[0], ab[1]); }
  friend bool operator==(const Subspace2D&, const Subspace2D&) = default;
};

/// The ambient norm composed with (a, b) ↦ a·b1 + b·b2. Itself a 2D norm.
template <NormLike N>
class RestrictedNorm {
public:
  RestrictedNorm(N ambient, Subspace2D sub) : ambient_(std::move(ambient)), sub_(std::move(sub)) {
    if (sub_.ambient_dim != ambient_.dim()) throw Error("restrict_norm: subspace lives in a different dimension");
  }

  std::size_t dim() const noexcept { return 2; }
  const Subspace2D& subspace() const noexcept { return sub_; }
  const N& ambient() const noexcept { return ambient_; }

  double operator()(const Vector& x) const {
    if (x.size() != 2) throw Error("restricted norm: expects 2 coordinates");
    if (!x.all_finite()) throw Error("restricted norm: non-finite coordinate");
    return ambient_(sub_.to_ambient(x[0], x[1]));
  }

private:
  N ambient_;
  Subspace2D sub_;
};

template <NormLike N>
RestrictedNorm<N> restrict_norm(const N& norm, const Subspace2D& sub) {
  return RestrictedNorm<N>(norm, sub);
}

namespace detail {

inline std::pair<Vector, Vector> orthonormalize(const Vector& a, const Vector& b) {
  Vector u = a / reference_length(a);
  Vector v = b - dot(b, u) * u;
  v /= reference_length(v);
  return {u, v};
}

}  // namespace detail

struct SubspaceFinding {
  Subspace2D subspace;
  Detection2D detection;
};

struct SubspaceVerdicts {
  bool all_euclidean = true;
  std::size_t checked = 0;
  std::optional<SubspaceFinding> worst;  // largest deviation; lowest index on ties
};

/// Runs the 2D detector on every coordinate plane, then on `count` seeded
/// random planes (Gaussian pairs, orthonormalized in reference coordinates).
template <NormLike N>
SubspaceVerdicts sample_subspace_verdicts(const N& norm, std::size_t count, std::uint64_t seed,
                                          std::size_t theta_samples = 720) {
  const std::size_t dim = norm.dim();
  if (dim < 3) throw Error("sample_subspace_verdicts: needs dimension >= 3");
  if (count < 1) throw Error("sample_subspace_verdicts: count must be >= 1");
  SubspaceVerdicts out;
  auto visit = [&](const Subspace2D& sub) {
    auto det = detect_euclidean_2d(restrict_norm(norm, sub), theta_samples);
    out.all_euclidean = out.all_euclidean && det.verdict;
    if (!out.worst || det.max_deviation > out.worst->detection.max_deviation)
      out.worst = SubspaceFinding{sub, std::move(det)};
    ++out.checked;
  };
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) visit(Subspace2D::coordinate(dim, i, j));
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    Vector a = rng.normal_vector(dim), b = rng.normal_vector(dim);
    const double g = dot(a, a) * dot(b, b) - dot(a, b) * dot(a, b);
    if (!(g > 1e-6)) continue;
    auto [u, v] = detail::orthonormalize(a, b);
    visit(Subspace2D::make(std::move(u), std::move(v)));
  }
  return out;
}

/// e1, e2 orthogonal unit vectors of a plane U and a unit e3 whose
/// translate e3 + U supports the unit sphere.
struct Frame3D {
  Vector e1, e2, e3;
  double support_defect = 0.0;
};

struct SupportOptions {
  bool require_euclidean = true;
  std::size_t theta_samples = 720;
  std::size_t grid = 64;
};

inline constexpr double kSupportDefectLimit = 1e-6;

/// max over u in U (a polar grid of radius ≤ 2) of max(0, 1 − ‖e3 + u‖).
template <NormLike N>
double support_defect(const N& norm, const Vector& e1, const Vector& e2, const Vector& e3) {
  double worst = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double r = 0.05 * k;
    for (int j = 0; j < 64; ++j) {
      const double t = 2.0 * std::numbers::pi * j / 64.0;
      worst = std::max(worst, 1.0 - norm(e3 + r * std::cos(t) * e1 + r * std::sin(t) * e2));
    }
  }
  return worst;
}

/// Support vector for a plane U of a 3D norm. The functional f(x) = n·x,
/// n = b1 × b2, vanishes on U; its maximizer over the unit ball gives the
/// point where the plane {f = max} (a translate of U) touches the sphere.
/// The maximizer is located by a spherical grid, Nelder–Mead over the two
/// angles, then Newton steps on ‖x‖² over the plane {f = 1}, which pin it
/// down to rounding for smooth norms.
template <NormLike N>
Frame3D find_support_vector(const N& norm, const Subspace2D& U, const SupportOptions& opt = {}) {
  if (norm.dim() != 3) throw Error("find_support_vector: needs a 3D norm");
  if (U.ambient_dim != 3) throw Error("find_support_vector: subspace must live in dimension 3");
  const auto det = detect_euclidean_2d(restrict_norm(norm, U), opt.theta_samples);
  if (opt.require_euclidean && !det.verdict) throw Error("find_support_vector: subspace U is not euclidean");

  Frame3D frame;
  frame.e1 = U.to_ambient(det.basis.e1);
  frame.e2 = U.to_ambient(det.basis.e2);
  const Vector n{U.b1[1] * U.b2[2] - U.b1[2] * U.b2[1], U.b1[2] * U.b2[0] - U.b1[0] * U.b2[2],
                 U.b1[0] * U.b2[1] - U.b1[1] * U.b2[0]};

  auto direction = [](double th, double ph) {
    return Vector{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  auto ratio = [&](const Vector& x) { return dot(n, x) / norm(x); };

  double best_th = 0.0, best_ph = 0.0, best = -1e300;
  for (std::size_t i = 0; i < opt.grid; ++i) {
    const double th = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(opt.grid);
    for (std::size_t j = 0; j < opt.grid; ++j) {
      const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(opt.grid);
      const double r = ratio(direction(th, ph));
      if (r > best) {
        best = r;
        best_th = th;
        best_ph = ph;
      }
    }
  }
  SimplexOptions so;
  so.max_iters = 2000;
  so.initial_step = std::numbers::pi / static_cast<double>(opt.grid);
  so.f_tolerance = 0.0;
  const auto nm = nelder_mead([&](const std::vector<double>& a) { return -ratio(direction(a[0], a[1])); },
                              {best_th, best_ph}, so);
  Vector x = direction(nm.x[0], nm.x[1]);

  // Newton on ψ(a, b) = ‖c + a·u + b·v‖² over the plane f = 1.
  auto [u, v] = detail::orthonormalize(U.b1, U.b2);
  Vector c = x / dot(n, x);
  auto psi = [&](double a, double b) {
    const double r = norm(c + a * u + b * v);
    return r * r;
  };
  const double h = 1e-3 * reference_length(c);
  for (int it = 0; it < 8; ++it) {
    const double f0 = psi(0, 0);
    const double fa = psi(h, 0), fA = psi(-h, 0), fb = psi(0, h), fB = psi(0, -h);
    const double fab = psi(h, h), faB = psi(h, -h), fAb = psi(-h, h), fAB = psi(-h, -h);
    const double ga = (fa - fA) / (2 * h), gb = (fb - fB) / (2 * h);
    const double haa = (fa - 2 * f0 + fA) / (h * h), hbb = (fb - 2 * f0 + fB) / (h * h);
    const double hab = (fab - faB - fAb + fAB) / (4 * h * h);
    const double dt = haa * hbb - hab * hab;
    if (!(haa > 0) || !(dt > 0)) break;
    const double da = -(hbb * ga - hab * gb) / dt, db = -(haa * gb - hab * ga) / dt;
    if (!(psi(da, db) <= f0)) break;
    c = c + da * u + db * v;
    if (std::abs(da) + std::abs(db) < 1e-15 * reference_length(c)) break;
  }
  frame.e3 = gauge_normalize(norm, c);
  if (dot(n, frame.e3) < 0) frame.e3 = -frame.e3;

  frame.support_defect = support_defect(norm, frame.e1, frame.e2, frame.e3);
  if (frame.support_defect > kSupportDefectLimit)
    throw Error("find_support_vector: refinement did not reach a supporting plane");
  return frame;
}

struct SphereResidual {
  double residual = 0.0;  // max |‖sin φ cos θ·e1 + sin φ sin θ·e2 + cos φ·e3‖ − 1|
  double worst_theta = 0.0;
  double worst_phi = 0.0;
  double section_deviation = 0.0;  // worst 2D deviation over the planes span{p_θ, e3}
};

/// Checks that the frame parametrizes the unit sphere as a round sphere,
/// and runs the 2D detector on each section span{p_θ, e3}.
template <NormLike N>
SphereResidual sphere_param_residual(const N& norm, const Frame3D& frame, std::size_t theta_count,
                                     std::size_t phi_count, std::size_t section_theta_samples = 180) {
  if (theta_count < 1 || phi_count < 1) throw Error("sphere_param_residual: grid must be non-empty");
  SphereResidual out;
  bool first = true;
  for (std::size_t i = 0; i < theta_count; ++i) {
    const double th = std::numbers::pi * static_cast<double>(i) / static_cast<double>(theta_count);
    const Vector p = std::cos(th) * frame.e1 + std::sin(th) * frame.e2;
    for (std::size_t j = 0; j < phi_count; ++j) {
      const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(phi_count);
      const double r = std::abs(norm(std::sin(ph) * p + std::cos(ph) * frame.e3) - 1.0);
      if (first || r > out.residual) {
        out.residual = r;
        out.worst_theta = th;
        out.worst_phi = ph;
        first = false;
      }
    }
    const auto det = detect_euclidean_2d(restrict_norm(norm, Subspace2D::make(p, frame.e3)), section_theta_samples);
    out.section_deviation = std::max(out.section_deviation, det.max_deviation);
  }
  return out;
}

/// A plane on which g(θ) = ‖cos θ·e1 + sin θ·e2‖ leaves 1.
struct FailingSection {
  Subspace2D subspace;
  Vector e1, e2;  // ambient coordinates
  double theta = 0.0;
  double deviation = 0.0;
  friend bool operator==(const FailingSection&, const FailingSection&) = default;
};

/// A triple on which the polarization form is not additive.
struct FailingTriple {
  Triple triple;
  double additivity_residual = 0.0;
  friend bool operator==(const FailingTriple&, const FailingTriple&) = default;
};

using Witness = std::variant<ViolationCertificate, FailingTriple, FailingSection>;

struct Tolerances {
  double axiom = 1e-7;
  double gram_model = 1e-7;
  double constancy = kConstancyTolerance;
  double eps = 1e-8;
  double gap_threshold = 0.05;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Residuals gathered on the way to a verdict; absent when not computed.
struct Evidence {
  std::optional<double> axiom_additivity, axiom_homogeneity, axiom_definiteness;
  std::optional<double> gram_model_residual;
  std::optional<double> constancy_deviation;  // 2D detector, or worst sampled plane
  std::optional<std::size_t> subspaces_checked;
  std::optional<Subspace2D> worst_subspace;
  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct Verdict {
  bool euclidean = false;
  std::optional<Matrix> gram;
  std::optional<Witness> witness;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  Evidence evidence;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct DetectConfig {
  std::size_t triple_samples = 500;
  std::size_t subspace_samples = 50;
  std::uint64_t seed = 0;
  std::size_t max_dim = kDefaultMaxDim;
  std::size_t theta_samples = 720;
  std::size_t restarts = 200;
  std::size_t max_iters = 400;
  Tolerances tolerances{};
};

/// Re-runs the check that belongs to the witness's kind.
template <NormLike N>
bool witness_holds(const N& norm, const Witness& w, const Tolerances& tol) {
  if (const auto* c = std::get_if<ViolationCertificate>(&w)) return certificate_holds(norm, *c);
  if (const auto* t = std::get_if<FailingTriple>(&w)) {
    const auto& [u, v, x] = t->triple;
    return std::abs(polarize(norm, u + v, x) - (polarize(norm, u, x) + polarize(norm, v, x))) >= tol.axiom;
  }
  const auto& s = std::get<FailingSection>(w);
  if (std::abs(norm(s.e1) - 1.0) > 1e-8 || std::abs(norm(s.e2) - 1.0) > 1e-8) return false;
  if (std::abs(norm(s.e1 + s.e2) - norm(s.e1 - s.e2)) > 1e-8) return false;
  return std::abs(norm(std::cos(s.theta) * s.e1 + std::sin(s.theta) * s.e2) - 1.0) > tol.constancy;
}

namespace detail {

template <NormLike N>
Witness section_witness(const N& norm, const Subspace2D& sub, const Detection2D& det, const DetectConfig& cfg) {
  const auto restricted = restrict_norm(norm, sub);
  SearchConfig sc;
  sc.restarts = cfg.restarts;
  sc.max_iters = cfg.max_iters;
  sc.eps = cfg.tolerances.eps;
  sc.gap_threshold = cfg.tolerances.gap_threshold;
  sc.seed = cfg.seed;
  if (auto cert = search_violation(restricted, sc)) {
    auto& q = cert->quadruple;
    auto lifted = criterion_residuals(norm, sub.to_ambient(q.v1), sub.to_ambient(q.w1), sub.to_ambient(q.v2),
                                      sub.to_ambient(q.w2));
    ViolationCertificate c{std::move(lifted), cert->eps_used, cert->gap_threshold_used, cert->search_trace};
    if (certificate_holds(norm, c)) return c;
  }
  return FailingSection{sub, sub.to_ambient(det.basis.e1), sub.to_ambient(det.basis.e2), det.worst_theta,
                        det.max_deviation};
}

}  // namespace detail

/// Euclidean or not, with evidence. Dimension 1 is trivially euclidean,
/// dimension 2 uses the constructive 2D detector, and higher dimensions
/// require the polarization form to pass the inner-product axioms on
/// sampled triples, a positive-definite Gram matrix reproducing ‖x‖², and
/// every sampled plane to pass the 2D detector.
template <NormLike N>
Verdict detect_euclidean(const N& norm, const DetectConfig& cfg = {}) {
  const std::size_t dim = norm.dim();
  if (dim < 1 || dim > cfg.max_dim)
    throw Error("detect_euclidean: dimension " + std::to_string(dim) + " outside [1, " +
                std::to_string(cfg.max_dim) + "]");
  Verdict v;
  v.tolerances = cfg.tolerances;
  v.seed = cfg.seed;

  if (dim == 1) {
    v.euclidean = true;
    v.gram = recover_gram(norm, 1, cfg.seed).matrix;
    return v;
  }

  if (dim == 2) {
    const auto det = detect_euclidean_2d(norm, cfg.theta_samples);
    v.evidence.constancy_deviation = det.max_deviation;
    v.euclidean = det.max_deviation <= cfg.tolerances.constancy;
    if (v.euclidean) {
      const auto g = recover_gram(norm, cfg.triple_samples, cfg.seed);
      v.evidence.gram_model_residual = g.max_model_residual;
      v.gram = g.matrix;
    } else {
      v.witness = detail::section_witness(norm, Subspace2D::coordinate(2, 0, 1), det, cfg);
    }
    return v;
  }

  const auto ax = axiom_residuals(norm, cfg.triple_samples, cfg.seed);
  const auto g = recover_gram(norm, cfg.triple_samples, cfg.seed);
  const auto subs = sample_subspace_verdicts(norm, cfg.subspace_samples, cfg.seed, cfg.theta_samples);
  v.evidence.axiom_additivity = ax.additivity;
  v.evidence.axiom_homogeneity = ax.homogeneity;
  v.evidence.axiom_definiteness = ax.definiteness;
  v.evidence.gram_model_residual = g.max_model_residual;
  v.evidence.subspaces_checked = subs.checked;
  if (subs.worst) {
    v.evidence.constancy_deviation = subs.worst->detection.max_deviation;
    v.evidence.worst_subspace = subs.worst->subspace;
  }

  v.euclidean = ax.max() < cfg.tolerances.axiom && g.psd && g.max_model_residual < cfg.tolerances.gram_model &&
                subs.all_euclidean;
  if (v.euclidean) {
    v.gram = g.matrix;
  } else if (!subs.all_euclidean) {
    v.witness = detail::section_witness(norm, subs.worst->subspace, subs.worst->detection, cfg);
  } else {
    v.witness = FailingTriple{ax.worst_additivity, ax.additivity};
  }
  return v;
}

}  // namespace normscope
