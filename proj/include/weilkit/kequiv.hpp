#ifndef WEILKIT_KEQUIV_HPP
#define WEILKIT_KEQUIV_HPP

// Bundled birational pairs and the equal-point-count comparison.

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "weilkit/counter.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/zetakit.hpp"

#ifndef WEILKIT_DEFAULT_MODELS_DIR
#define WEILKIT_DEFAULT_MODELS_DIR "models"
#endif

namespace weilkit {

enum class Relation { k_equivalent, not_k_equivalent, isomorphic };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::k_equivalent: return "k_equivalent";
    case Relation::not_k_equivalent: return "not_k_equivalent";
    case Relation::isomorphic: return "isomorphic";
  }
  return "?";
}

struct ExamplePair {
  std::string name;
  VarietyModel x;
  VarietyModel y;
  Relation relation = Relation::k_equivalent;
  std::string provenance;
};

struct RegistryEntry {
  const char* name;
  const char* x;
  const char* y;
  Relation relation;
  const char* provenance;
};

inline const std::vector<RegistryEntry>& example_registry() {
  static const std::vector<RegistryEntry> reg = {
      {"conifold_flop", "conifold_res1", "conifold_res2", Relation::k_equivalent,
       "the two small resolutions of the node xy = zw, related by the Atiyah flop; both dominate the "
       "conifold and are dominated by its blow-up at the origin, with equal pullbacks of the canonical class"},
      {"blowup_control", "a2", "bl0", Relation::not_k_equivalent,
       "the affine plane and its blow-up at the origin: birational, but the blow-up adds the exceptional "
       "divisor to the canonical class"},
      {"curve_pair", "ell5", "ell5_shift", Relation::isomorphic,
       "two plane models of y^2 = x^3 - x related by the translation x -> x + 1"},
      {"curve_mismatch", "p1", "ell5", Relation::not_k_equivalent,
       "the projective line against an elliptic curve: not birational, genus 0 vs genus 1"},
  };
  return reg;
}

inline std::string default_models_dir() {
  if (const char* env = std::getenv("WEILKIT_MODELS"); env && *env) return env;
  return WEILKIT_DEFAULT_MODELS_DIR;
}

inline ExamplePair load_example(const std::string& name, const std::string& models_dir = default_models_dir()) {
  for (const auto& e : example_registry()) {
    if (name != e.name) continue;
    ExamplePair pair{e.name, load_variety(models_dir + "/" + e.x + ".vty"),
                     load_variety(models_dir + "/" + e.y + ".vty"), e.relation, e.provenance};
    for (const auto* m : {&pair.x, &pair.y})
      for (const auto& d : validate(*m)) throw DomainError("example model " + m->name + ": " + d.message);
    return pair;
  }
  std::string known;
  for (const auto& e : example_registry()) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw DomainError("unknown example '" + name + "' (known: " + known + ")");
}

struct PrimeComparison {
  std::uint64_t p = 0;
  bool good = true;
  PointCountTable x;
  PointCountTable y;
  std::string verdict;          // "equal", "mismatch" or "skipped"
  std::vector<std::int64_t> difference;  // N_r(Y) - N_r(X)
};

struct ComparisonReport {
  std::string name;
  Relation relation = Relation::k_equivalent;
  unsigned r_max = 0;
  std::vector<PrimeComparison> primes;
  std::vector<std::uint64_t> skipped;
  std::string verdict;  // consistent-with-K-equivalence | inconsistent-with-K-equivalence | inconclusive
};

/// Counts both models at every prime, skipping primes where either model has
/// a singular F_p-point.
inline ComparisonReport compare_counts(const ExamplePair& pair, const std::vector<std::uint64_t>& primes, unsigned r_max,
                                       const CountOptions& opt = {}, CountCache* cache = nullptr) {
  for (auto p : primes)
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  ComparisonReport rep{pair.name, pair.relation, r_max, {}, {}, ""};
  bool any_mismatch = false, any_compared = false;
  for (auto p : primes) {
    PrimeComparison pc;
    pc.p = p;
    const FieldDesc f = make_field(p, 1);
    for (const auto* m : {&pair.x, &pair.y})
      if (m->expected_dim && !smoothness_scan(*m, f, opt.budget).smooth()) pc.good = false;
    if (!pc.good) {
      pc.verdict = "skipped";
      rep.skipped.push_back(p);
      rep.primes.push_back(std::move(pc));
      continue;
    }
    CountOptions o = opt;
    o.scan_smoothness = false;
    pc.x = count_tower(pair.x, p, 1, r_max, o, cache);
    pc.y = count_tower(pair.y, p, 1, r_max, o, cache);
    for (const auto* t : {&pc.x, &pc.y})
      if (!t->complete()) throw Error("example " + pair.name + " at p = " + std::to_string(p) + ": " + t->truncation_reason);
    for (unsigned r = 0; r < r_max; ++r)
      pc.difference.push_back(static_cast<std::int64_t>(pc.y.counts[r]) - static_cast<std::int64_t>(pc.x.counts[r]));
    const bool eq = compare_zeta(pc.x, pc.y).equal();
    pc.verdict = eq ? "equal" : "mismatch";
    any_mismatch = any_mismatch || !eq;
    any_compared = true;
    rep.primes.push_back(std::move(pc));
  }
  rep.verdict = any_mismatch   ? "inconsistent-with-K-equivalence"
                : any_compared ? "consistent-with-K-equivalence"
                               : "inconclusive";
  return rep;
}

struct CurveHodgeSide {
  PointCountTable table;
  RationalZeta zeta;
  WeilFactorization weil;
  HodgeDiamond hodge;
};

struct HodgeVerdict {
  std::uint64_t p = 0;
  bool equal = false;
  CurveHodgeSide x;
  CurveHodgeSide y;
};

inline CurveHodgeSide curve_pipeline(const VarietyModel& m, std::uint64_t p, unsigned r_max, const CountOptions& opt,
                                     CountCache* cache) {
  if (!m.expected_dim || *m.expected_dim != 1)
    throw DomainError("model " + m.name + " is not a curve (needs dim 1)");
  CurveHodgeSide s;
  s.table = count_tower(m, p, 1, r_max, opt, cache);
  if (s.table.smooth_at_p && !*s.table.smooth_at_p)
    throw DomainError("model " + m.name + " is singular at p = " + std::to_string(p));
  s.zeta = reconstruct_zeta(s.table, 1);
  s.weil = weil_classify(s.zeta, 1);
  if (!s.weil.purity_ok) throw DomainError("model " + m.name + ": purity_ok is false at p = " + std::to_string(p));
  s.hodge = curve_hodge(s.weil);
  return s;
}

/// Counts -> zeta -> weights -> Hodge diamond for both curves of the pair.
inline HodgeVerdict infer_equal_hodge_curves(const ExamplePair& pair, std::uint64_t p, unsigned r_max = 2,
                                             const CountOptions& opt = {}, CountCache* cache = nullptr) {
  for (const auto* m : {&pair.x, &pair.y})
    if (!m->expected_dim || *m->expected_dim != 1)
      throw DomainError("example " + pair.name + " is not a pair of curves: " + m->name + " has dim " +
                        (m->expected_dim ? std::to_string(*m->expected_dim) : std::string("unset")));
  HodgeVerdict v;
  v.p = p;
  v.x = curve_pipeline(pair.x, p, r_max, opt, cache);
  v.y = curve_pipeline(pair.y, p, r_max, opt, cache);
  v.equal = v.x.hodge == v.y.hodge;
  return v;
}

}  // namespace weilkit

#endif  // WEILKIT_KEQUIV_HPP
