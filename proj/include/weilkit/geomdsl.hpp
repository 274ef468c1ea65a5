#ifndef WEILKIT_GEOMDSL_HPP
#define WEILKIT_GEOMDSL_HPP

// Text format for varieties (.vty). One statement per line or per `;`:
//
//   name conifold_res1
//   ambient A^4 x P^1
//   vars x,y,z,w | s,t
//   dim 3
//   eq x*t - z*s
//   eq w*t - y*s
//   gauge c1 x,y 1
//
// Full grammar in docs/grammar.ebnf.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weilkit/common.hpp"
#include "weilkit/ffield.hpp"
#include "weilkit/polynomial.hpp"

namespace weilkit {

struct AmbientFactor {
  enum class Kind { affine, projective };
  Kind kind = Kind::affine;
  unsigned dim = 1;

  bool projective() const { return kind == Kind::projective; }
  std::size_t num_vars() const { return projective() ? dim + 1 : dim; }
  bool operator==(const AmbientFactor&) const = default;
};

struct AmbientSpace {
  std::vector<AmbientFactor> factors;
  std::vector<std::string> names;  // one per variable, factor by factor

  std::size_t num_vars() const {
    std::size_t n = 0;
    for (const auto& f : factors) n += f.num_vars();
    return n;
  }

  /// Geometric dimension: sum of factor dimensions.
  unsigned dimension() const {
    unsigned d = 0;
    for (const auto& f : factors) d += f.dim;
    return d;
  }

  /// Variable index range [first, second) of factor i.
  std::pair<std::size_t, std::size_t> range(std::size_t i) const {
    std::size_t b = 0;
    for (std::size_t j = 0; j < i; ++j) b += factors[j].num_vars();
    return {b, b + factors.at(i).num_vars()};
  }

  bool all_affine() const {
    return std::none_of(factors.begin(), factors.end(), [](const auto& f) { return f.projective(); });
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  }

  bool operator==(const AmbientSpace&) const = default;
};

/// Gauge form on one chart: numerator * d(coords) / det(d eqs / d(other vars)),
/// i.e. a polynomial multiple of the residue form attached to the coordinate
/// subset `coords`.
struct GaugeChart {
  std::string id;
  Polynomial numerator;
  std::vector<std::size_t> coords;
  bool operator==(const GaugeChart&) const = default;
};

struct VarietyModel {
  std::string name;
  AmbientSpace ambient;
  std::vector<Polynomial> equations;
  std::vector<GaugeChart> gauge_charts;
  std::optional<unsigned> expected_dim;

  bool operator==(const VarietyModel&) const = default;
};

struct Diagnostic {
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

namespace dsl_detail {

enum class Tok { ident, integer, plus, minus, star, caret, lparen, rparen, comma, bar, end_stmt, eof };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto push = [&](Tok k, std::string t, std::size_t c) { out.push_back({k, std::move(t), line, c}); };
  while (i < src.size()) {
    const char ch = src[i];
    const std::size_t c0 = col;
    if (ch == '\n') {
      push(Tok::end_stmt, "\\n", c0);
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i, ++col;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i, ++col;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      push(Tok::ident, std::string(src.substr(i, j - i)), c0);
      col += j - i;
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (src[j] == '.' || src[j] == 'e' || src[j] == 'E'))
        throw ParseError("non-integer coefficient", line, col + (j - i));
      push(Tok::integer, std::string(src.substr(i, j - i)), c0);
      col += j - i;
      i = j;
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ',': k = Tok::comma; break;
      case '|': k = Tok::bar; break;
      case ';': k = Tok::end_stmt; break;
      case '/':
      case '.':
        throw ParseError("non-integer coefficient", line, col);
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    push(k, std::string(1, ch), c0);
    ++i, ++col;
  }
  out.push_back({Tok::eof, "<end of input>", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  VarietyModel parse() {
    VarietyModel m;
    bool have_ambient = false, have_vars = false;
    while (true) {
      skip_terminators();
      if (peek().kind == Tok::eof) break;
      const Token kw = expect(Tok::ident, "statement keyword");
      if (kw.text == "name") {
        m.name = expect(Tok::ident, "model name").text;
      } else if (kw.text == "ambient") {
        if (have_ambient) fail("duplicate ambient statement", kw);
        m.ambient.factors = parse_factors();
        have_ambient = true;
      } else if (kw.text == "vars") {
        if (!have_ambient) fail("vars before ambient", kw);
        if (have_vars) fail("duplicate vars statement", kw);
        parse_vars(m.ambient, kw);
        have_vars = true;
        nvars_ = m.ambient.num_vars();
        names_ = &m.ambient;
      } else if (kw.text == "dim") {
        const Token t = expect(Tok::integer, "dimension");
        m.expected_dim = static_cast<unsigned>(std::stoul(t.text));
      } else if (kw.text == "eq") {
        if (!have_vars) fail("eq before vars", kw);
        m.equations.push_back(parse_expr());
      } else if (kw.text == "gauge") {
        if (!have_vars) fail("gauge before vars", kw);
        GaugeChart chart;
        chart.id = expect(Tok::ident, "chart id").text;
        chart.coords.push_back(lookup(expect(Tok::ident, "chart coordinate")));
        while (peek().kind == Tok::comma) {
          next();
          chart.coords.push_back(lookup(expect(Tok::ident, "chart coordinate")));
        }
        chart.numerator = parse_expr();
        m.gauge_charts.push_back(std::move(chart));
      } else {
        fail("unknown statement '" + kw.text + "'", kw);
      }
      if (peek().kind != Tok::end_stmt && peek().kind != Tok::eof) fail("unexpected '" + peek().text + "'", peek());
    }
    if (!have_ambient) fail("missing ambient statement", peek());
    if (!have_vars) fail("missing vars statement", peek());
    return m;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.col); }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what + ", found '" + peek().text + "'", peek());
    return next();
  }

  void skip_terminators() {
    while (peek().kind == Tok::end_stmt) next();
  }

  std::vector<AmbientFactor> parse_factors() {
    std::vector<AmbientFactor> fs;
    while (true) {
      const Token kind = expect(Tok::ident, "A or P");
      AmbientFactor f;
      if (kind.text == "A") f.kind = AmbientFactor::Kind::affine;
      else if (kind.text == "P") f.kind = AmbientFactor::Kind::projective;
      else fail("expected A or P, found '" + kind.text + "'", kind);
      expect(Tok::caret, "'^'");
      const Token d = expect(Tok::integer, "dimension");
      f.dim = static_cast<unsigned>(std::stoul(d.text));
      if (f.dim < 1) fail("factor dimension must be >= 1", d);
      fs.push_back(f);
      if (peek().kind == Tok::ident && peek().text == "x") {
        next();
        continue;
      }
      break;
    }
    return fs;
  }

  void parse_vars(AmbientSpace& amb, const Token& kw) {
    std::vector<std::vector<Token>> groups(1);
    groups.back().push_back(expect(Tok::ident, "variable name"));
    while (peek().kind == Tok::comma || peek().kind == Tok::bar) {
      if (next().kind == Tok::bar) groups.emplace_back();
      groups.back().push_back(expect(Tok::ident, "variable name"));
    }
    if (groups.size() != amb.factors.size())
      fail("vars has " + std::to_string(groups.size()) + " groups but ambient has " +
               std::to_string(amb.factors.size()) + " factors",
           kw);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i].size() != amb.factors[i].num_vars())
        fail("factor " + std::to_string(i + 1) + " needs " + std::to_string(amb.factors[i].num_vars()) +
                 " variables, got " + std::to_string(groups[i].size()),
             groups[i].front());
      for (const auto& t : groups[i]) {
        if (!seen.insert(t.text).second) fail("duplicate variable '" + t.text + "'", t);
        amb.names.push_back(t.text);
      }
    }
  }

  std::size_t lookup(const Token& t) const {
    auto idx = names_->index_of(t.text);
    if (!idx) fail("unknown variable '" + t.text + "'", t);
    return *idx;
  }

  Polynomial parse_expr() {
    Polynomial acc(nvars_);
    bool first = true;
    while (true) {
      bool negate = false;
      if (peek().kind == Tok::plus || peek().kind == Tok::minus) {
        negate = next().kind == Tok::minus;
      } else if (!first) {
        break;
      }
      Polynomial t = parse_term();
      if (negate) acc -= t;
      else acc += t;
      first = false;
    }
    return acc;
  }

  Polynomial parse_term() {
    Polynomial t = parse_power();
    while (peek().kind == Tok::star) {
      next();
      t *= parse_power();
    }
    return t;
  }

  Polynomial parse_power() {
    Polynomial base = parse_atom();
    if (peek().kind == Tok::caret) {
      next();
      const Token e = expect(Tok::integer, "integer exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(e.text)));
    }
    return base;
  }

  Polynomial parse_atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::integer:
        next();
        return Polynomial::constant(nvars_, Integer(t.text));
      case Tok::ident:
        next();
        return Polynomial::variable(nvars_, lookup(t));
      case Tok::lparen: {
        next();
        Polynomial inner = parse_expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::minus:
        next();
        return -parse_power();
      default:
        fail("expected a number, variable or '(', found '" + t.text + "'", t);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t nvars_ = 0;
  const AmbientSpace* names_ = nullptr;
};

}  // namespace dsl_detail

inline VarietyModel parse_variety(std::string_view text) {
  return dsl_detail::Parser(dsl_detail::lex(text)).parse();
}

/// Reads a .vty file. Models without a `name` statement take the file stem.
inline VarietyModel load_variety(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  VarietyModel m = parse_variety(ss.str());
  if (m.name.empty()) {
    auto slash = path.find_last_of('/');
    std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
    auto dot = stem.find_last_of('.');
    m.name = stem.substr(0, dot);
  }
  return m;
}

/// Canonical text form. parse_variety(print_variety(m)) == m.
inline std::string print_variety(const VarietyModel& m, bool with_name = true) {
  std::string out;
  if (with_name && !m.name.empty()) out += "name " + m.name + ";\n";
  out += "ambient ";
  for (std::size_t i = 0; i < m.ambient.factors.size(); ++i) {
    const auto& f = m.ambient.factors[i];
    out += (i ? " x " : "") + std::string(f.projective() ? "P^" : "A^") + std::to_string(f.dim);
  }
  out += ";\nvars ";
  for (std::size_t i = 0; i < m.ambient.factors.size(); ++i) {
    auto [b, e] = m.ambient.range(i);
    if (i) out += " | ";
    for (std::size_t v = b; v < e; ++v) out += (v > b ? "," : "") + m.ambient.names[v];
  }
  out += ";\n";
  if (m.expected_dim) out += "dim " + std::to_string(*m.expected_dim) + ";\n";
  for (const auto& eq : m.equations) out += "eq " + eq.to_string(m.ambient.names) + ";\n";
  for (const auto& g : m.gauge_charts) {
    out += "gauge " + g.id + " ";
    for (std::size_t i = 0; i < g.coords.size(); ++i) out += (i ? "," : "") + m.ambient.names[g.coords[i]];
    out += " " + g.numerator.to_string(m.ambient.names) + ";\n";
  }
  return out;
}

/// Content hash of the canonical form (name excluded), 16 hex digits, FNV-1a.
inline std::string model_hash(const VarietyModel& m) {
  const std::string canon = print_variety(m, false);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xF];
  return out;
}

inline std::vector<Diagnostic> validate(const VarietyModel& m) {
  std::vector<Diagnostic> d;
  const auto& amb = m.ambient;
  const std::size_t nv = amb.num_vars();
  if (amb.factors.empty()) d.push_back({"ambient space has no factors"});
  for (const auto& f : amb.factors)
    if (f.dim < 1) d.push_back({"ambient factor dimension must be >= 1"});
  if (amb.names.size() != nv)
    d.push_back({"ambient needs " + std::to_string(nv) + " variables, " + std::to_string(amb.names.size()) + " named"});
  {
    std::set<std::string> seen(amb.names.begin(), amb.names.end());
    if (seen.size() != amb.names.size()) d.push_back({"variable names are not unique"});
  }
  for (std::size_t j = 0; j < m.equations.size(); ++j) {
    const auto& eq = m.equations[j];
    if (eq.nvars() != nv) {
      d.push_back({"equation " + std::to_string(j + 1) + " has wrong variable count"});
      continue;
    }
    for (std::size_t i = 0; i < amb.factors.size(); ++i) {
      if (!amb.factors[i].projective()) continue;
      auto [b, e] = amb.range(i);
      if (!eq.block_degree(b, e))
        d.push_back({"equation " + std::to_string(j + 1) + " is not homogeneous in projective block " +
                     std::to_string(i + 1) + " (P^" + std::to_string(amb.factors[i].dim) + ")"});
    }
  }
  if (m.expected_dim && *m.expected_dim > amb.dimension())
    d.push_back({"expected dimension exceeds ambient dimension"});
  if (!m.gauge_charts.empty()) {
    if (!amb.all_affine()) d.push_back({"gauge charts are only supported on affine ambients"});
    if (!m.expected_dim) d.push_back({"gauge charts need a dim statement"});
    std::set<std::string> ids;
    for (const auto& g : m.gauge_charts) {
      if (!ids.insert(g.id).second) d.push_back({"duplicate gauge chart id '" + g.id + "'"});
      if (m.expected_dim && g.coords.size() != *m.expected_dim)
        d.push_back({"gauge chart '" + g.id + "' lists " + std::to_string(g.coords.size()) +
                     " coordinates but dim is " + std::to_string(*m.expected_dim)});
      if (std::set<std::size_t>(g.coords.begin(), g.coords.end()).size() != g.coords.size())
        d.push_back({"gauge chart '" + g.id + "' repeats a coordinate"});
      if (g.numerator.nvars() != nv) d.push_back({"gauge chart '" + g.id + "' numerator has wrong variable count"});
      if (nv >= g.coords.size() && nv - g.coords.size() != m.equations.size())
        d.push_back({"gauge chart '" + g.id + "' leaves " + std::to_string(nv - g.coords.size()) +
                     " solved variables for " + std::to_string(m.equations.size()) + " equations"});
    }
  }
  return d;
}

/// Value of an integer polynomial at a point of F_q^n (reference arithmetic).
inline FieldElement evaluate_poly(const Polynomial& poly, const std::vector<FieldElement>& point, const FieldDesc& f) {
  if (point.size() != poly.nvars())
    throw DomainError("evaluation arity mismatch: polynomial has " + std::to_string(poly.nvars()) +
                      " variables, point has " + std::to_string(point.size()));
  FieldElement acc = field_zero(f);
  for (const auto& [e, c] : poly.terms()) {
    FieldElement t = field_from_integer(c, f);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t = arith(t, field_pow(point[i], e[i], f), FieldOp::mul, f);
    acc = arith(acc, t, FieldOp::add, f);
  }
  return acc;
}

}  // namespace weilkit

#endif  // WEILKIT_GEOMDSL_HPP
