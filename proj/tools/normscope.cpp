// normscope: decide whether a finite-dimensional norm is euclidean.
//
//   normscope analyze --norm <spec> [--dim d] [--seed s] [--out report.json]
//   normscope search  --norm <spec> [--restarts n] [--section i,j]
//   normscope render  --norm <spec> [--witness report.json] [--section i,j] --out fig.svg
//
// Exit codes: 0 euclidean / no violation, 1 non-euclidean / violation found, 2 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "normscope/report.hpp"
#include "normscope/svg.hpp"

namespace {

using namespace normscope;

constexpr int kExitError = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NORMSCOPE_SEED")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("NORMSCOPE_SEED is not an unsigned integer");
    return v;
  }
  return 0;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << text;
    if (!f.flush()) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::pair<std::size_t, std::size_t> parse_section(const std::string& s, std::size_t dim) {
  const auto comma = s.find(',');
  std::size_t i = 0, j = 0;
  bool ok = comma != std::string::npos;
  if (ok) {
    const auto a = std::from_chars(s.data(), s.data() + comma, i);
    const auto b = std::from_chars(s.data() + comma + 1, s.data() + s.size(), j);
    ok = a.ec == std::errc{} && a.ptr == s.data() + comma && b.ec == std::errc{} && b.ptr == s.data() + s.size();
  }
  if (!ok) throw Error("--section expects 'i,j', got '" + s + "'");
  if (i == j || i >= dim || j >= dim)
    throw Error("--section " + s + ": need two distinct axes below dimension " + std::to_string(dim));
  return {i, j};
}

// Coordinates of an ambient vector inside the coordinate plane (i, j).
Vector section_coords(const Vector& x, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != i && k != j && std::abs(x[k]) > 1e-12)
      throw Error("witness does not lie in the requested --section plane");
  return {x[i], x[j]};
}

struct Common {
  std::string norm;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string section;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--norm", c.norm, "norm spec: p:<p|inf> | wp:<p>:<w,..> | quad:<a11,..> | poly:<x,y;..>")
      ->required();
  cmd->add_option("--dim", c.dim, "ambient dimension (p: family)");
  cmd->add_option("--seed", c.seed, "seed (default $NORMSCOPE_SEED or 0)");
}

int run_analyze_cmd(const Common& c, bool timings) {
  AnalyzeConfig cfg;
  cfg.dim = c.dim;
  cfg.seed = c.seed.value_or(default_seed());
  cfg.record_timings = timings;
  const auto report = run_analyze(c.norm, cfg);
  write_output(c.out, emit_report(report));
  return exit_code(report);
}

int run_search_cmd(const Common& c, std::size_t restarts) {
  const NormSpec norm = parse_norm_spec(c.norm, c.dim);
  SearchConfig sc;
  sc.restarts = restarts;
  sc.seed = c.seed.value_or(default_seed());
  Subspace2D sub = Subspace2D::coordinate(norm.dim(), 0, 1);
  if (!c.section.empty()) {
    const auto [i, j] = parse_section(c.section, norm.dim());
    sub = Subspace2D::coordinate(norm.dim(), i, j);
  } else if (norm.dim() != 2) {
    throw Error("search works on 2D norms; pick a plane with --section i,j");
  }
  const auto cert = search_violation(restrict_norm(norm, sub), sc);
  nlohmann::json j = {{"tool_version", kToolVersion},
                      {"norm_spec", c.norm},
                      {"seed", sc.seed},
                      {"section", sub},
                      {"found", cert.has_value()},
                      {"certificate", cert ? nlohmann::json(*cert) : nlohmann::json(nullptr)}};
  write_output(c.out, write_json(j));
  return cert ? 1 : 0;
}

int run_render_cmd(const Common& c, const std::string& witness_path) {
  const NormSpec norm = parse_norm_spec(c.norm, c.dim);
  std::size_t i = 0, j = 1;
  if (!c.section.empty()) {
    std::tie(i, j) = parse_section(c.section, norm.dim());
  } else if (norm.dim() != 2) {
    throw Error("cannot draw a " + std::to_string(norm.dim()) +
                "-dimensional unit ball; render a coordinate section with --section i,j");
  }
  const auto plane = restrict_norm(norm, Subspace2D::coordinate(norm.dim(), i, j));

  std::optional<AronszajnQuadruple> quad;
  if (!witness_path.empty()) {
    const Report rep = parse_report(read_file(witness_path));
    const auto* cert = rep.verdict.witness ? std::get_if<ViolationCertificate>(&*rep.verdict.witness) : nullptr;
    if (!cert) throw Error(witness_path + " carries no Aronszajn certificate");
    const auto& q = cert->quadruple;
    quad = criterion_residuals(plane, section_coords(q.v1, i, j), section_coords(q.w1, i, j),
                               section_coords(q.v2, i, j), section_coords(q.w2, i, j));
  }
  write_output(c.out, render_svg(plane, quad));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normscope: is this norm euclidean?"};
  app.require_subcommand(1);

  Common analyze, search, render;
  bool timings = false;
  std::size_t restarts = 200;
  std::string witness;

  auto* a = app.add_subcommand("analyze", "run every detector and emit a JSON report");
  add_common(a, analyze);
  a->add_option("--out", analyze.out, "report path (default stdout)");
  a->add_flag("--timings", timings, "record per-phase wall time (makes output non-reproducible)");

  auto* s = app.add_subcommand("search", "search for a violating parallelogram quadruple");
  add_common(s, search);
  s->add_option("--restarts", restarts, "multistart count")->check(CLI::PositiveNumber);
  s->add_option("--section", search.section, "coordinate plane i,j for dimension >= 3");
  s->add_option("--out", search.out, "output path (default stdout)");

  auto* r = app.add_subcommand("render", "draw the unit ball and an optional witness as SVG");
  add_common(r, render);
  r->add_option("--witness", witness, "report.json carrying an Aronszajn certificate");
  r->add_option("--section", render.section, "coordinate plane i,j for dimension >= 3");
  r->add_option("--out", render.out, "SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cout << error_json("usage", e.what());
    return kExitError;
  }

  try {
    if (*a) return run_analyze_cmd(analyze, timings);
    if (*s) return run_search_cmd(search, restarts);
    return run_render_cmd(render, witness);
  } catch (const ParseError& e) {
    std::cerr << "normscope: " << e.what() << '\n';
    std::cout << error_json("parse", e.what());
  } catch (const std::exception& e) {
    std::cerr << "normscope: " << e.what() << '\n';
    std::cout << error_json("runtime", e.what());
  }
  return kExitError;
}
