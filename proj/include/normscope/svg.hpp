#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aronszajn.hpp"
#include "norm.hpp"

namespace normscope {

struct RenderOptions {
  std::size_t ball_points = 512;
};

/// Fixed-point text; "-0.000" style outputs are normalized to "0.000".
inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace detail {

using P2 = std::array<double, 2>;

struct SvgWriter {
  std::string out;

  // y is flipped so the picture has the usual mathematical orientation.
  std::string pt(const P2& p) const { return format_fixed(p[0], 7) + "," + format_fixed(-p[1], 7); }

  void polygon(const std::vector<P2>& pts, const char* stroke, double width) {
    out += "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i == 0 ? "M " : " L ") + pt(pts[i]);
    out += " Z\" fill=\"none\" stroke=\"";
    out += stroke;
    out += "\" stroke-width=\"" + format_fixed(width, 4) + "\"/>\n";
  }

  void line(const P2& a, const P2& b, const char* stroke, double width) {
    out += "<line x1=\"" + format_fixed(a[0], 7) + "\" y1=\"" + format_fixed(-a[1], 7) + "\" x2=\"" +
           format_fixed(b[0], 7) + "\" y2=\"" + format_fixed(-b[1], 7) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + format_fixed(width, 4) + "\" stroke-dasharray=\"0.02,0.02\"/>\n";
  }

  void text(const P2& at, const std::string& s) {
    out += "<text x=\"" + format_fixed(at[0], 7) + "\" y=\"" + format_fixed(-at[1], 7) +
           "\" font-size=\"0.06\" font-family=\"monospace\" text-anchor=\"middle\">" + s + "</text>\n";
  }
};

template <NormLike N>
std::vector<P2> unit_ball(const N& norm, std::size_t count) {
  std::vector<P2> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto u = unit_direction(norm, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
    pts.push_back({u[0], u[1]});
  }
  return pts;
}

}  // namespace detail

/// Standalone SVG of a 2D norm's unit ball. With a certificate, the two
/// parallelograms (0, v, v+w, w) are drawn side by side, each over a copy of
/// the unit ball at the same scale, with their two sides and two diagonals
/// labelled by norm value.
template <NormLike N>
std::string render_svg(const N& norm, const std::optional<AronszajnQuadruple>& witness, const RenderOptions& opt = {}) {
  if (norm.dim() != 2) throw Error("render_svg: only 2D norms can be drawn; pick a plane with --section i,j");
  using detail::P2;
  detail::SvgWriter w;
  w.out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.5 -1.5 3 3\">\n";
  const auto ball = detail::unit_ball(norm, opt.ball_points);

  if (!witness) {
    w.polygon(ball, "black", 0.01);
  } else {
    const auto& q = *witness;
    const std::array<std::array<Vector, 2>, 2> pairs{{{q.v1, q.w1}, {q.v2, q.w2}}};
    double extent = 0.0;
    for (const auto& p : ball) extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
    for (const auto& [v, u] : pairs)
      for (const Vector& x : {v, u, Vector(v + u)}) extent = std::max({extent, std::abs(x[0]), std::abs(x[1])});
    const double scale = 0.65 / extent;
    const std::array<double, 2> centers{-0.75, 0.75};
    const std::array<const char*, 2> names{"1", "2"};

    for (std::size_t k = 0; k < 2; ++k) {
      const auto& [v, u] = pairs[k];
      auto at = [&](const Vector& x) { return P2{centers[k] + scale * x[0], scale * x[1]}; };
      auto mid = [&](const Vector& a, const Vector& b) { return at(0.5 * (a + b)); };
      std::vector<P2> scaled;
      for (const auto& p : ball) scaled.push_back({centers[k] + scale * p[0], scale * p[1]});
      w.polygon(scaled, "gray", 0.005);

      const Vector zero(2), sum = v + u;
      w.polygon({at(zero), at(v), at(sum), at(u)}, "black", 0.01);
      w.line(at(zero), at(sum), "blue", 0.008);
      w.line(at(u), at(v), "red", 0.008);

      const std::string n = names[k];
      w.text(mid(zero, v), "|v" + n + "|=" + format_fixed(norm(v), 4));
      w.text(mid(zero, u), "|w" + n + "|=" + format_fixed(norm(u), 4));
      w.text(mid(u, v), "|v" + n + "-w" + n + "|=" + format_fixed(norm(v - u), 4));
      w.text(at(0.8 * sum), "|v" + n + "+w" + n + "|=" + format_fixed(norm(sum), 4));
    }
  }
  w.out += "</svg>\n";
  return w.out;
}

}  // namespace normscope
