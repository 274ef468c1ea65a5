#ifndef WEILKIT_JSON_IO_HPP
#define WEILKIT_JSON_IO_HPP

// JSON forms of the library's results. Schema documented in docs/json-schema.md.
// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings;
// rationals are "num/den" strings.

#include <string>

#include <json.hpp>

#include "weilkit/counter.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/kequiv.hpp"
#include "weilkit/padics.hpp"
#include "weilkit/zetakit.hpp"

namespace weilkit {

inline constexpr const char* kSchemaVersion = "weilkit/1";

using Json = nlohmann::json;

inline Json to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline Json to_json(const IntPoly& p) {
  Json a = Json::array();
  for (const auto& c : p) a.push_back(to_json(c));
  return a;
}

inline Json to_json(const PointCountTable& t) {
  Json j = {{"p", t.p}, {"k", t.k}, {"q", t.q()}, {"r_max", t.r_max}, {"r_achieved", t.r_achieved()},
            {"counts", t.counts}};
  j["smooth_at_p"] = t.smooth_at_p ? Json(*t.smooth_at_p) : Json(nullptr);
  if (!t.truncation_reason.empty()) j["truncation_reason"] = t.truncation_reason;
  return j;
}

inline Json to_json(const RationalZeta& z) {
  return {{"numerator", to_json(z.numerator)},
          {"denominator", to_json(z.denominator)},
          {"q", z.q},
          {"method", z.method},
          {"verified_terms", z.verified_terms}};
}

inline Json to_json(const WeilFactorization& w) {
  Json roots = Json::array();
  for (const auto& r : w.roots)
    roots.push_back({{"re", r.value.real()},
                     {"im", r.value.imag()},
                     {"abs", std::abs(r.value)},
                     {"side", r.in_numerator ? "numerator" : "denominator"},
                     {"weight", r.weight < 0 ? Json(nullptr) : Json(r.weight)},
                     {"parity_ok", r.parity_ok}});
  Json factors = Json::array();
  for (const auto& f : w.factors) factors.push_back(to_json(f));
  Json j = {{"dim", w.dim},   {"q", w.q},           {"roots", roots},
            {"b", w.b},       {"purity_ok", w.purity_ok}, {"factors_exact", w.factors_exact}};
  j["factors"] = w.factors_exact ? factors : Json(nullptr);
  return j;
}

inline Json to_json(const HodgeDiamond& h) { return {{"n", h.n}, {"h", h.h}, {"genus", genus(h)}}; }

inline Json to_json(const IntegralBound& b) {
  return {{"lo", to_string(b.lo)}, {"hi", to_string(b.hi)}, {"level", b.level}, {"width", to_string(b.width())}};
}

inline Json point_json(const std::vector<std::uint64_t>& pt) { return Json(pt); }

inline Json to_json(const GaugeIntegral& g) {
  Json certs = Json::array();
  for (const auto& c : g.certificates) certs.push_back({{"point", point_json(c.point)}, {"chart", c.chart}});
  return {{"value", to_string(g.value)},
          {"disks", g.disks},
          {"n", g.n},
          {"canonical_lattice", g.canonical_lattice},
          {"certificates", certs}};
}

inline Json to_json(const ChangeOfVarsReport& r) {
  return {{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"compatible", r.compatible}};
}

inline Json to_json(const ComparisonReport& rep) {
  Json primes = Json::array();
  for (const auto& pc : rep.primes) {
    Json j = {{"p", pc.p}, {"good", pc.good}, {"verdict", pc.verdict}};
    if (pc.good) {
      j["counts_x"] = pc.x.counts;
      j["counts_y"] = pc.y.counts;
      j["difference"] = pc.difference;
    }
    primes.push_back(j);
  }
  return {{"example", rep.name}, {"relation", to_string(rep.relation)}, {"r_max", rep.r_max},
          {"primes", primes},    {"skipped", rep.skipped},             {"verdict", rep.verdict}};
}

inline Json to_json(const HodgeVerdict& v) {
  auto side = [](const CurveHodgeSide& s) {
    return Json{{"counts", s.table.counts}, {"zeta", to_json(s.zeta)}, {"b", s.weil.b}, {"hodge", to_json(s.hodge)}};
  };
  return {{"p", v.p}, {"equal", v.equal}, {"x", side(v.x)}, {"y", side(v.y)}};
}

/// Text rendering derived from the JSON form: "key: value" lines, nested
/// objects indented, arrays of scalars joined by spaces.
inline void render_text(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(indent, ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat_array = [](const Json& a) {
    for (const auto& e : a)
      if (e.is_structured()) return false;
    return true;
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out += pad + it.key() + ":\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array() && flat_array(v)) {
      std::string line;
      for (const auto& e : v) line += (line.empty() ? "" : " ") + scalar(e);
      out += pad + it.key() + ": " + line + "\n";
    } else if (v.is_array()) {
      out += pad + it.key() + ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_object()) {
          out += pad + "  -\n";
          render_text(v[i], out, indent + 4);
        } else {
          std::string line;
          for (const auto& e : v[i]) line += (line.empty() ? "" : " ") + scalar(e);
          out += pad + "  - " + line + "\n";
        }
      }
    } else {
      out += pad + it.key() + ": " + scalar(v) + "\n";
    }
  }
}

/// CSV rendering: one "path,value" row per scalar leaf.
inline void render_csv(const Json& j, std::string& out, const std::string& prefix = "") {
  if (j.is_structured()) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it)
        render_csv(it.value(), out, prefix.empty() ? it.key() : prefix + "." + it.key());
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) render_csv(j[i], out, prefix + "." + std::to_string(i));
    }
    return;
  }
  std::string v = j.is_string() ? j.get<std::string>() : j.dump();
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    v = q + "\"";
  }
  out += prefix + "," + v + "\n";
}

}  // namespace weilkit

#endif  // WEILKIT_JSON_IO_HPP
