#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "norm.hpp"

namespace normscope {

class ParseError : public Error {
public:
  ParseError(std::size_t position, std::string token, const std::string& what)
      : Error("norm spec: " + what + " at position " + std::to_string(position) + " (token '" + token + "')"),
        position_(position),
        token_(std::move(token)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }

private:
  std::size_t position_;
  std::string token_;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t pos;
};

// Splits s[begin, end) on `sep`, remembering absolute offsets.
inline std::vector<Token> split(std::string_view s, std::size_t begin, char sep) {
  std::vector<Token> out;
  std::size_t start = begin;
  for (std::size_t i = begin; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back({s.substr(start, i - start), start});
      start = i + 1;
    }
  }
  return out;
}

inline bool is_infinity(std::string_view t) { return t == "inf" || t == "Inf" || t == "INF"; }

// Locale-independent; '.' is the only decimal separator.
inline double parse_number(const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (t.text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ParseError(t.pos, std::string(t.text), "expected a finite number");
  return v;
}

inline std::vector<double> parse_list(std::string_view s, std::size_t begin, char sep) {
  std::vector<double> out;
  for (const auto& t : split(s, begin, sep)) out.push_back(parse_number(t));
  return out;
}

}  // namespace detail

/// Parses `p:<float|inf>`, `wp:<float|inf>:<w1,...,wd>`, `quad:<a11,...,add>`
/// (row-major) or `poly:<x1,y1;x2,y2;...>`. Dimension comes from the
/// parameters; `p:` takes it from `dim` (default 2). A `dim` that disagrees
/// with the parameters is an error.
inline NormSpec parse_norm_spec(std::string_view s, std::optional<std::size_t> dim = std::nullopt) {
  if (s.empty()) throw ParseError(0, "", "empty norm spec");
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError(0, std::string(s), "missing ':' after family tag");
  const std::string_view tag = s.substr(0, colon);
  const std::size_t body = colon + 1;

  auto check_dim = [&](std::size_t inferred) {
    if (dim && *dim != inferred)
      throw ParseError(0, std::string(tag),
                       "--dim " + std::to_string(*dim) + " conflicts with inferred dimension " +
                           std::to_string(inferred));
    return inferred;
  };
  auto parse_p = [&](const detail::Token& t) -> std::optional<double> {
    if (detail::is_infinity(t.text)) return std::nullopt;
    const double p = detail::parse_number(t);
    if (p < 1.0) throw ParseError(t.pos, std::string(t.text), "p must be >= 1");
    return p;
  };

  if (tag == "p") {
    const auto p = parse_p({s.substr(body), body});
    const std::size_t d = dim.value_or(2);
    if (d < 1) throw ParseError(0, "p", "dimension must be >= 1");
    return p ? NormSpec::p_norm(*p, d) : NormSpec::p_infinity(d);
  }
  if (tag == "wp") {
    const auto second = s.find(':', body);
    if (second == std::string_view::npos) throw ParseError(body, std::string(s.substr(body)), "expected wp:<p>:<weights>");
    const auto p = parse_p({s.substr(body, second - body), body});
    auto w = detail::parse_list(s, second + 1, ',');
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!(w[i] > 0.0)) throw ParseError(second + 1, std::to_string(w[i]), "weights must be positive");
    check_dim(w.size());
    return p ? NormSpec::weighted(*p, std::move(w)) : NormSpec::weighted_infinity(std::move(w));
  }
  if (tag == "quad") {
    const auto a = detail::parse_list(s, body, ',');
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.size()))));
    if (n * n != a.size())
      throw ParseError(body, std::string(s.substr(body)), "quad needs d*d entries, got " + std::to_string(a.size()));
    check_dim(n);
    Matrix m(n);
    m.a = a;
    try {
      return NormSpec::quadratic(std::move(m));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(body, std::string(s.substr(body)), e.what());
    }
  }
  if (tag == "poly") {
    std::vector<Point2> pts;
    for (const auto& t : detail::split(s, body, ';')) {
      const auto xy = detail::split(s.substr(0, t.pos + t.text.size()), t.pos, ',');
      if (xy.size() != 2) throw ParseError(t.pos, std::string(t.text), "expected a vertex 'x,y'");
      pts.push_back({detail::parse_number(xy[0]), detail::parse_number(xy[1])});
    }
    check_dim(2);
    try {
      return NormSpec::polytope(std::move(pts));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(body, std::string(s.substr(body)), e.what());
    }
  }
  throw ParseError(0, std::string(tag), "unknown norm family (expected p, wp, quad or poly)");
}

}  // namespace normscope
