#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "json_write.hpp"
#include "lift3d.hpp"
#include "spec_parse.hpp"

namespace normscope {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct AronszajnCriterion {
  bool euclidean = true;  // no violation found within budget
  Subspace2D subspace;    // plane searched, ambient coordinates
  std::optional<double> diag_plus_gap;
  std::size_t restarts = 0;
  friend bool operator==(const AronszajnCriterion&, const AronszajnCriterion&) = default;
};

struct PolarizationCriterion {
  bool euclidean = true;
  double additivity = 0.0, homogeneity = 0.0, definiteness = 0.0;
  bool gram_psd = false;
  double gram_model_residual = 0.0;
  friend bool operator==(const PolarizationCriterion&, const PolarizationCriterion&) = default;
};

struct ParallelogramCriterion {
  bool euclidean = true;
  double max_residual = 0.0;
  std::size_t pairs_checked = 0;
  friend bool operator==(const ParallelogramCriterion&, const ParallelogramCriterion&) = default;
};

struct Report {
  std::string tool_version = kToolVersion;
  std::string norm_spec_string;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  Verdict verdict;
  NormAxiomResiduals norm_axioms;
  AronszajnCriterion aronszajn;
  PolarizationCriterion polarization;
  ParallelogramCriterion parallelogram;
  std::map<std::string, double> timings_ms;
  friend bool operator==(const Report&, const Report&) = default;
};

// ---- JSON mapping -------------------------------------------------------

inline void to_json(nlohmann::json& j, const Vector& v) { j = v.data(); }
inline void from_json(const nlohmann::json& j, Vector& v) { v = Vector(j.get<std::vector<double>>()); }

inline void to_json(nlohmann::json& j, const Matrix& m) {
  j = nlohmann::json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    std::vector<double> row(m.a.begin() + static_cast<std::ptrdiff_t>(i * m.n),
                            m.a.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.n));
    j.push_back(row);
  }
}
inline void from_json(const nlohmann::json& j, Matrix& m) {
  m = Matrix(j.size());
  for (std::size_t i = 0; i < m.n; ++i) {
    if (j[i].size() != m.n) throw Error("report: gram matrix is not square");
    for (std::size_t k = 0; k < m.n; ++k) m(i, k) = j[i][k].get<double>();
  }
}

inline void to_json(nlohmann::json& j, const Subspace2D& s) { j = {{"b1", s.b1}, {"b2", s.b2}}; }
inline void from_json(const nlohmann::json& j, Subspace2D& s) {
  auto b1 = j.at("b1").get<Vector>(), b2 = j.at("b2").get<Vector>();
  if (b1.size() == 0 && b2.size() == 0) {
    s = Subspace2D{};  // not applicable (dimension 1)
    return;
  }
  s = Subspace2D::make(std::move(b1), std::move(b2));
}

inline void to_json(nlohmann::json& j, const NormAxiomResiduals& r) {
  j = {{"homogeneity", r.homogeneity}, {"triangle", r.triangle}, {"positivity", r.positivity}};
}
inline void from_json(const nlohmann::json& j, NormAxiomResiduals& r) {
  j.at("homogeneity").get_to(r.homogeneity);
  j.at("triangle").get_to(r.triangle);
  j.at("positivity").get_to(r.positivity);
}

inline void to_json(nlohmann::json& j, const Tolerances& t) {
  j = {{"axiom", t.axiom}, {"gram_model", t.gram_model}, {"constancy", t.constancy}, {"eps", t.eps},
       {"gap_threshold", t.gap_threshold}};
}
inline void from_json(const nlohmann::json& j, Tolerances& t) {
  j.at("axiom").get_to(t.axiom);
  j.at("gram_model").get_to(t.gram_model);
  j.at("constancy").get_to(t.constancy);
  j.at("eps").get_to(t.eps);
  j.at("gap_threshold").get_to(t.gap_threshold);
}

namespace detail {

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const ViolationCertificate& c) {
  const auto& q = c.quadruple;
  j = {{"kind", "aronszajn_certificate"},
       {"v1", q.v1},
       {"w1", q.w1},
       {"v2", q.v2},
       {"w2", q.w2},
       {"side_v_residual", q.side_v_residual},
       {"side_w_residual", q.side_w_residual},
       {"diag_minus_residual", q.diag_minus_residual},
       {"diag_plus_gap", q.diag_plus_gap},
       {"eps_used", c.eps_used},
       {"gap_threshold_used", c.gap_threshold_used},
       {"search_trace",
        {{"seed", c.search_trace.seed},
         {"restarts_used", c.search_trace.restarts_used},
         {"objective_evals", c.search_trace.objective_evals}}}};
}
inline void from_json(const nlohmann::json& j, ViolationCertificate& c) {
  auto& q = c.quadruple;
  j.at("v1").get_to(q.v1);
  j.at("w1").get_to(q.w1);
  j.at("v2").get_to(q.v2);
  j.at("w2").get_to(q.w2);
  j.at("side_v_residual").get_to(q.side_v_residual);
  j.at("side_w_residual").get_to(q.side_w_residual);
  j.at("diag_minus_residual").get_to(q.diag_minus_residual);
  j.at("diag_plus_gap").get_to(q.diag_plus_gap);
  j.at("eps_used").get_to(c.eps_used);
  j.at("gap_threshold_used").get_to(c.gap_threshold_used);
  const auto& t = j.at("search_trace");
  t.at("seed").get_to(c.search_trace.seed);
  t.at("restarts_used").get_to(c.search_trace.restarts_used);
  t.at("objective_evals").get_to(c.search_trace.objective_evals);
}

inline void to_json(nlohmann::json& j, const FailingTriple& t) {
  j = {{"kind", "failing_triple"},
       {"u", t.triple.u},
       {"v", t.triple.v},
       {"w", t.triple.w},
       {"additivity_residual", t.additivity_residual}};
}
inline void from_json(const nlohmann::json& j, FailingTriple& t) {
  j.at("u").get_to(t.triple.u);
  j.at("v").get_to(t.triple.v);
  j.at("w").get_to(t.triple.w);
  j.at("additivity_residual").get_to(t.additivity_residual);
}

inline void to_json(nlohmann::json& j, const FailingSection& s) {
  j = {{"kind", "failing_section"}, {"subspace", s.subspace}, {"e1", s.e1},
       {"e2", s.e2},                {"theta", s.theta},       {"deviation", s.deviation}};
}
inline void from_json(const nlohmann::json& j, FailingSection& s) {
  j.at("subspace").get_to(s.subspace);
  j.at("e1").get_to(s.e1);
  j.at("e2").get_to(s.e2);
  j.at("theta").get_to(s.theta);
  j.at("deviation").get_to(s.deviation);
}

inline void to_json(nlohmann::json& j, const Witness& w) {
  std::visit([&](const auto& x) { to_json(j, x); }, w);
}
inline void from_json(const nlohmann::json& j, Witness& w) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "aronszajn_certificate")
    w = j.get<ViolationCertificate>();
  else if (kind == "failing_triple")
    w = j.get<FailingTriple>();
  else if (kind == "failing_section")
    w = j.get<FailingSection>();
  else
    throw Error("report: unknown witness kind '" + kind + "'");
}

inline void to_json(nlohmann::json& j, const Evidence& e) {
  j = {{"axiom_additivity", detail::optional_json(e.axiom_additivity)},
       {"axiom_homogeneity", detail::optional_json(e.axiom_homogeneity)},
       {"axiom_definiteness", detail::optional_json(e.axiom_definiteness)},
       {"gram_model_residual", detail::optional_json(e.gram_model_residual)},
       {"constancy_deviation", detail::optional_json(e.constancy_deviation)},
       {"subspaces_checked", detail::optional_json(e.subspaces_checked)},
       {"worst_subspace", detail::optional_json(e.worst_subspace)}};
}
inline void from_json(const nlohmann::json& j, Evidence& e) {
  e.axiom_additivity = detail::optional_from<double>(j, "axiom_additivity");
  e.axiom_homogeneity = detail::optional_from<double>(j, "axiom_homogeneity");
  e.axiom_definiteness = detail::optional_from<double>(j, "axiom_definiteness");
  e.gram_model_residual = detail::optional_from<double>(j, "gram_model_residual");
  e.constancy_deviation = detail::optional_from<double>(j, "constancy_deviation");
  e.subspaces_checked = detail::optional_from<std::size_t>(j, "subspaces_checked");
  e.worst_subspace = detail::optional_from<Subspace2D>(j, "worst_subspace");
}

inline void to_json(nlohmann::json& j, const Verdict& v) {
  j = {{"euclidean", v.euclidean},
       {"gram", detail::optional_json(v.gram)},
       {"witness", detail::optional_json(v.witness)},
       {"tolerances", v.tolerances},
       {"seed", v.seed},
       {"evidence", v.evidence}};
}
inline void from_json(const nlohmann::json& j, Verdict& v) {
  j.at("euclidean").get_to(v.euclidean);
  v.gram = detail::optional_from<Matrix>(j, "gram");
  v.witness = detail::optional_from<Witness>(j, "witness");
  j.at("tolerances").get_to(v.tolerances);
  j.at("seed").get_to(v.seed);
  j.at("evidence").get_to(v.evidence);
}

inline void to_json(nlohmann::json& j, const AronszajnCriterion& c) {
  j = {{"euclidean", c.euclidean},
       {"subspace", c.subspace},
       {"diag_plus_gap", detail::optional_json(c.diag_plus_gap)},
       {"restarts", c.restarts}};
}
inline void from_json(const nlohmann::json& j, AronszajnCriterion& c) {
  j.at("euclidean").get_to(c.euclidean);
  j.at("subspace").get_to(c.subspace);
  c.diag_plus_gap = detail::optional_from<double>(j, "diag_plus_gap");
  j.at("restarts").get_to(c.restarts);
}

inline void to_json(nlohmann::json& j, const PolarizationCriterion& c) {
  j = {{"euclidean", c.euclidean},       {"additivity", c.additivity},
       {"homogeneity", c.homogeneity},   {"definiteness", c.definiteness},
       {"gram_psd", c.gram_psd},         {"gram_model_residual", c.gram_model_residual}};
}
inline void from_json(const nlohmann::json& j, PolarizationCriterion& c) {
  j.at("euclidean").get_to(c.euclidean);
  j.at("additivity").get_to(c.additivity);
  j.at("homogeneity").get_to(c.homogeneity);
  j.at("definiteness").get_to(c.definiteness);
  j.at("gram_psd").get_to(c.gram_psd);
  j.at("gram_model_residual").get_to(c.gram_model_residual);
}

inline void to_json(nlohmann::json& j, const ParallelogramCriterion& c) {
  j = {{"euclidean", c.euclidean}, {"max_residual", c.max_residual}, {"pairs_checked", c.pairs_checked}};
}
inline void from_json(const nlohmann::json& j, ParallelogramCriterion& c) {
  j.at("euclidean").get_to(c.euclidean);
  j.at("max_residual").get_to(c.max_residual);
  j.at("pairs_checked").get_to(c.pairs_checked);
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = {{"schema_version", kReportSchemaVersion},
       {"tool_version", r.tool_version},
       {"norm_spec", r.norm_spec_string},
       {"dim", r.dim},
       {"seed", r.seed},
       {"verdict", r.verdict},
       {"norm_axioms", r.norm_axioms},
       {"criteria", {{"aronszajn", r.aronszajn}, {"polarization", r.polarization}, {"parallelogram", r.parallelogram}}},
       {"timings_ms", r.timings_ms}};
}
inline void from_json(const nlohmann::json& j, Report& r) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) throw Error("report: unsupported schema_version");
  j.at("tool_version").get_to(r.tool_version);
  j.at("norm_spec").get_to(r.norm_spec_string);
  j.at("dim").get_to(r.dim);
  j.at("seed").get_to(r.seed);
  j.at("verdict").get_to(r.verdict);
  j.at("norm_axioms").get_to(r.norm_axioms);
  const auto& c = j.at("criteria");
  c.at("aronszajn").get_to(r.aronszajn);
  c.at("polarization").get_to(r.polarization);
  c.at("parallelogram").get_to(r.parallelogram);
  j.at("timings_ms").get_to(r.timings_ms);
}

inline std::string emit_report(const Report& r) { return write_json(nlohmann::json(r)); }
inline Report parse_report(const std::string& text) { return nlohmann::json::parse(text).get<Report>(); }

// ---- analysis -----------------------------------------------------------

struct AnalyzeConfig {
  std::optional<std::size_t> dim;
  std::uint64_t seed = 0;
  bool record_timings = false;  // off by default so reports are byte-reproducible
  std::size_t parallelogram_pairs = 10000;
  std::size_t norm_axiom_samples = 1000;
  DetectConfig detect{};
};

/// 0 = euclidean, 1 = non-euclidean (a witness is attached).
inline int exit_code(const Report& r) { return r.verdict.euclidean ? 0 : 1; }

/// Runs every detector on one norm and gathers the three criteria side by
/// side: the Aronszajn search (on the norm itself in 2D, otherwise on the
/// worst sampled plane), the polarization axioms with Gram recovery, and
/// parallelogram sampling.
inline Report run_analyze(const std::string& norm_spec, const AnalyzeConfig& cfg) {
  using clock = std::chrono::steady_clock;
  Report r;
  r.norm_spec_string = norm_spec;
  r.seed = cfg.seed;
  const NormSpec norm = parse_norm_spec(norm_spec, cfg.dim);
  r.dim = norm.dim();

  auto timed = [&](const char* phase, auto&& fn) {
    const auto t0 = clock::now();
    fn();
    if (cfg.record_timings)
      r.timings_ms[phase] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  DetectConfig dc = cfg.detect;
  dc.seed = cfg.seed;
  timed("norm_axioms", [&] { r.norm_axioms = norm_axiom_residuals(norm, cfg.norm_axiom_samples, cfg.seed); });
  timed("detect", [&] { r.verdict = detect_euclidean(norm, dc); });

  timed("polarization", [&] {
    const auto ax = axiom_residuals(norm, dc.triple_samples, cfg.seed);
    const auto g = recover_gram(norm, dc.triple_samples, cfg.seed);
    auto& p = r.polarization;
    p.additivity = ax.additivity;
    p.homogeneity = ax.homogeneity;
    p.definiteness = ax.definiteness;
    p.gram_psd = g.psd;
    p.gram_model_residual = g.max_model_residual;
    p.euclidean = ax.max() < dc.tolerances.axiom && g.psd && g.max_model_residual < dc.tolerances.gram_model;
  });

  timed("parallelogram", [&] {
    const auto s = sample_parallelogram(norm, cfg.parallelogram_pairs, cfg.seed);
    r.parallelogram = {s.max_residual < dc.tolerances.axiom, s.max_residual, s.pairs_checked};
  });

  timed("aronszajn", [&] {
    if (norm.dim() < 2) {
      r.aronszajn.euclidean = true;
      return;
    }
    const Subspace2D sub = r.verdict.evidence.worst_subspace.value_or(Subspace2D::coordinate(norm.dim(), 0, 1));
    r.aronszajn.subspace = sub;
    r.aronszajn.restarts = dc.restarts;
    std::optional<double> gap;
    if (const auto* c = r.verdict.witness ? std::get_if<ViolationCertificate>(&*r.verdict.witness) : nullptr) {
      gap = c->quadruple.diag_plus_gap;
    } else {
      SearchConfig sc;
      sc.restarts = dc.restarts;
      sc.max_iters = dc.max_iters;
      sc.eps = dc.tolerances.eps;
      sc.gap_threshold = dc.tolerances.gap_threshold;
      sc.seed = cfg.seed;
      if (const auto c = search_violation(restrict_norm(norm, sub), sc)) gap = c->quadruple.diag_plus_gap;
    }
    r.aronszajn.euclidean = !gap.has_value();
    r.aronszajn.diag_plus_gap = gap;
  });
  return r;
}

/// Machine-readable error object printed when a command fails.
inline std::string error_json(const std::string& kind, const std::string& message) {
  return write_json({{"error", {{"kind", kind}, {"message", message}}}, {"tool_version", kToolVersion}});
}

}  // namespace normscope
