// Runs the three criteria over a handful of planar norms and prints a table.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "normscope/normscope.hpp"
#include "normscope/spec_parse.hpp"

int main() {
  using namespace normscope;
  const std::vector<std::string> specs = {"p:1",   "p:1.5", "p:2", "p:4", "p:inf", "quad:2,0.3,0.3,1",
                                          "poly:1,0;0.5,0.75;-0.5,0.75", "wp:2:1,3"};
  std::printf("%-30s %-10s %12s %12s %12s\n", "norm", "verdict", "constancy", "parallelogram", "gap");
  for (const auto& s : specs) {
    const auto t0 = std::chrono::steady_clock::now();
    const NormSpec norm = parse_norm_spec(s);
    const auto det = detect_euclidean_2d(norm);
    const auto par = sample_parallelogram(norm, 10000, 1);
    SearchConfig sc;
    sc.seed = 1;
    const auto cert = search_violation(norm, sc);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-30s %-10s %12.3e %12.3e %12.4f  (%.0f ms, restarts %zu)\n", s.c_str(),
                det.verdict ? "euclidean" : "not", det.max_deviation, par.max_residual,
                cert ? cert->quadruple.diag_plus_gap : 0.0, ms, cert ? cert->search_trace.restarts_used : 0);
  }
}
