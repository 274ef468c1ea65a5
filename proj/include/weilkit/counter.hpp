#ifndef WEILKIT_COUNTER_HPP
#define WEILKIT_COUNTER_HPP

// Exact point counting over F_q.
//
// Variables are grouped into units: one unit per affine variable, one per
// projective factor. A plan picks a set E of units to enumerate such that, once
// the E-values are fixed, every equation is affine-linear in the remaining
// variables L. The solutions in L are then counted by Gaussian elimination:
// q^(#free) for the affine part and (q^k - 1)/(q - 1) for each projective
// factor left in L. With E = all units this degenerates to plain exhaustive
// enumeration. Projective factors in E are scanned over representatives whose
// first nonzero coordinate is 1.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "weilkit/common.hpp"
#include "weilkit/count_cache.hpp"
#include "weilkit/ffield.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/zech.hpp"

namespace weilkit {

struct CountOptions {
  std::uint64_t budget = 100'000'000;  // max enumerated candidate tuples per count
  unsigned threads = 0;                // 0: hardware concurrency
  bool scan_smoothness = true;         // count_tower only
};

struct PointCountTable {
  std::uint64_t p = 0;
  unsigned k = 1;
  unsigned r_max = 0;                  // requested
  std::vector<std::uint64_t> counts;   // N_1 .. N_r for the levels achieved
  std::optional<bool> smooth_at_p;     // unset when no dim or the scan was skipped
  std::string truncation_reason;       // non-empty when counts.size() < r_max

  std::uint64_t q() const { return checked_pow(p, k); }
  unsigned r_achieved() const { return static_cast<unsigned>(counts.size()); }
  bool complete() const { return counts.size() == r_max; }
};

struct SmoothnessReport {
  FieldDesc field;
  std::uint64_t points_checked = 0;
  std::vector<std::vector<FieldElement>> singular_points;
  bool smooth() const { return singular_points.empty(); }
};

namespace counter_detail {

using Code = ZechField::Code;

struct Unit {
  bool projective = false;
  std::vector<std::size_t> vars;
};

inline std::vector<Unit> units_of(const AmbientSpace& amb) {
  std::vector<Unit> us;
  for (std::size_t i = 0; i < amb.factors.size(); ++i) {
    auto [b, e] = amb.range(i);
    if (amb.factors[i].projective()) {
      Unit u{true, {}};
      for (std::size_t v = b; v < e; ++v) u.vars.push_back(v);
      us.push_back(std::move(u));
    } else {
      for (std::size_t v = b; v < e; ++v) us.push_back(Unit{false, {v}});
    }
  }
  return us;
}

inline std::uint64_t projective_size(std::uint64_t q, std::size_t nvars) {
  // (q^nvars - 1) / (q - 1)
  std::uint64_t s = 0, pw = 1;
  for (std::size_t i = 0; i < nvars; ++i) {
    s += pw;
    pw = (i + 1 < nvars) ? pw * q : pw;
  }
  return s;
}

inline std::uint64_t unit_size(const Unit& u, std::uint64_t q) {
  return u.projective ? projective_size(q, u.vars.size()) : q;
}

/// Writes the index-th representative of a unit into vals. Projective
/// representatives are ordered by pivot position, then by the tail read as a
/// base-q number.
inline void assign_unit(const Unit& u, std::uint64_t index, std::uint64_t q, const ZechField& zf,
                        std::vector<Code>& vals) {
  if (!u.projective) {
    vals[u.vars[0]] = static_cast<Code>(index);
    return;
  }
  const std::size_t n = u.vars.size();
  for (std::size_t piv = 0; piv < n; ++piv) {
    std::uint64_t block = 1;
    for (std::size_t j = piv + 1; j < n; ++j) block *= q;
    if (index < block) {
      for (std::size_t j = 0; j < piv; ++j) vals[u.vars[j]] = zf.zero();
      vals[u.vars[piv]] = zf.one();
      for (std::size_t j = n; j-- > piv + 1;) {
        vals[u.vars[j]] = static_cast<Code>(index % q);
        index /= q;
      }
      return;
    }
    index -= block;
  }
}

struct CompiledTerm {
  Code coeff;
  std::vector<std::pair<std::size_t, std::uint32_t>> factors;  // (var, exponent) over enumerated vars
  int lvar = -1;                                               // column in the linear system, -1 for constant
};

struct CompiledEq {
  std::vector<CompiledTerm> terms;
  int block = -1;  // index into Plan::lblocks for equations linear in a projective L-block, -1 for affine part
};

struct Plan {
  std::vector<Unit> units;
  std::vector<bool> enumerated;                    // per unit
  std::vector<std::size_t> eunits;                 // indices of enumerated units, outermost first
  std::vector<std::size_t> laffine;                // affine variables in L
  std::vector<std::vector<std::size_t>> lblocks;   // projective blocks in L
  std::uint64_t candidates = 1;
};

/// Every monomial has L-degree <= 1 when the units outside `mask` form L.
inline bool linear_in_complement(const VarietyModel& m, const std::vector<Unit>& units, std::uint64_t mask) {
  std::vector<bool> in_l(m.ambient.num_vars(), false);
  for (std::size_t u = 0; u < units.size(); ++u)
    if (!(mask >> u & 1))
      for (auto v : units[u].vars) in_l[v] = true;
  for (const auto& eq : m.equations)
    for (const auto& [e, c] : eq.terms()) {
      unsigned d = 0;
      for (std::size_t v = 0; v < e.size(); ++v)
        if (in_l[v]) d += e[v];
      if (d > 1) return false;
    }
  return true;
}

inline Plan make_plan(const VarietyModel& m, std::uint64_t q, bool force_exhaustive = false) {
  Plan plan;
  plan.units = units_of(m.ambient);
  const std::size_t nu = plan.units.size();
  const std::uint64_t all = (nu >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << nu) - 1);
  std::uint64_t best_mask = all;
  if (!force_exhaustive && nu <= 16) {
    long double best_cost = -1;
    for (std::uint64_t mask = 0; mask <= all; ++mask) {
      long double cost = 1;
      for (std::size_t u = 0; u < nu; ++u)
        if (mask >> u & 1) cost *= static_cast<long double>(unit_size(plan.units[u], q));
      if (best_cost >= 0 && cost >= best_cost) continue;
      if (!linear_in_complement(m, plan.units, mask)) continue;
      best_cost = cost;
      best_mask = mask;
    }
  }
  plan.enumerated.assign(nu, false);
  unsigned __int128 cand = 1;
  for (std::size_t u = 0; u < nu; ++u) {
    if (best_mask >> u & 1) {
      plan.enumerated[u] = true;
      plan.eunits.push_back(u);
      cand *= unit_size(plan.units[u], q);
      if (cand > ~std::uint64_t{0}) cand = ~std::uint64_t{0};
    } else if (plan.units[u].projective) {
      plan.lblocks.push_back(plan.units[u].vars);
    } else {
      plan.laffine.push_back(plan.units[u].vars[0]);
    }
  }
  plan.candidates = static_cast<std::uint64_t>(cand);
  return plan;
}

inline std::vector<CompiledEq> compile(const VarietyModel& m, const Plan& plan, const ZechField& zf) {
  const std::size_t nv = m.ambient.num_vars();
  std::vector<int> lcol(nv, -1), lblock(nv, -1);
  for (std::size_t i = 0; i < plan.laffine.size(); ++i) lcol[plan.laffine[i]] = static_cast<int>(i);
  for (std::size_t b = 0; b < plan.lblocks.size(); ++b)
    for (std::size_t j = 0; j < plan.lblocks[b].size(); ++j) {
      lcol[plan.lblocks[b][j]] = static_cast<int>(j);
      lblock[plan.lblocks[b][j]] = static_cast<int>(b);
    }
  std::vector<CompiledEq> out;
  for (const auto& eq : m.equations) {
    CompiledEq ce;
    for (const auto& [e, c] : eq.terms()) {
      const Code cc = zf.from_integer(c);
      if (zf.is_zero(cc)) continue;
      CompiledTerm t{cc, {}, -1};
      for (std::size_t v = 0; v < nv; ++v) {
        if (!e[v]) continue;
        if (lcol[v] >= 0) {
          t.lvar = lcol[v];
          ce.block = lblock[v];
        } else {
          t.factors.emplace_back(v, e[v]);
        }
      }
      ce.terms.push_back(std::move(t));
    }
    out.push_back(std::move(ce));
  }
  return out;
}

/// Rank of a dense matrix over F_q (rows of equal length), destroying it.
inline std::size_t rank_in_place(std::vector<std::vector<Code>>& rows, std::size_t ncols, const ZechField& zf) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && zf.is_zero(rows[piv][col])) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const Code inv = zf.inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = zf.mul(x, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || zf.is_zero(rows[r][col])) continue;
      const Code f = zf.neg(rows[r][col]);
      for (std::size_t c = col; c < rows[r].size(); ++c) rows[r][c] = zf.add(rows[r][c], zf.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank;
}

class Worker {
 public:
  Worker(const Plan& plan, const std::vector<CompiledEq>& eqs, const ZechField& zf, std::size_t nvars)
      : plan_(plan), eqs_(eqs), zf_(zf), q_(zf.size()), vals_(nvars, zf.zero()) {
  }

  /// Sum of solution counts over enumerated candidates with outer index in [begin, end).
  unsigned __int128 run(std::uint64_t begin, std::uint64_t end) {
    unsigned __int128 total = 0;
    const auto& eu = plan_.eunits;
    if (eu.empty()) {
      if (begin == 0 && end >= 1) total += solve();
      return total;
    }
    std::vector<std::uint64_t> sizes, digits(eu.size(), 0);
    for (auto u : eu) sizes.push_back(unit_size(plan_.units[u], q_));
    std::uint64_t inner = 1;
    for (std::size_t i = 1; i < eu.size(); ++i) inner *= sizes[i];
    for (std::uint64_t outer = begin; outer < end; ++outer) {
      assign_unit(plan_.units[eu[0]], outer, q_, zf_, vals_);
      for (std::size_t i = 1; i < eu.size(); ++i) {
        digits[i] = 0;
        assign_unit(plan_.units[eu[i]], 0, q_, zf_, vals_);
      }
      for (std::uint64_t t = 0; t < inner; ++t) {
        total += solve();
        // odometer over the inner units, last unit fastest
        for (std::size_t i = eu.size(); i-- > 1;) {
          if (++digits[i] < sizes[i]) {
            assign_unit(plan_.units[eu[i]], digits[i], q_, zf_, vals_);
            break;
          }
          digits[i] = 0;
          assign_unit(plan_.units[eu[i]], 0, q_, zf_, vals_);
        }
      }
    }
    return total;
  }

 private:
  Code term_value(const CompiledTerm& t) const {
    Code v = t.coeff;
    for (const auto& [var, e] : t.factors) {
      v = zf_.mul(v, zf_.pow(vals_[var], e));
      if (zf_.is_zero(v)) break;
    }
    return v;
  }

  std::uint64_t solve() {
    const std::size_t na = plan_.laffine.size();
    if (na == 0 && plan_.lblocks.empty()) {
      for (const auto& eq : eqs_) {
        Code s = zf_.zero();
        for (const auto& t : eq.terms) s = zf_.add(s, term_value(t));
        if (!zf_.is_zero(s)) return 0;
      }
      return 1;
    }
    affine_.clear();
    for (auto& b : block_rows_) b.clear();
    block_rows_.resize(plan_.lblocks.size());
    for (const auto& eq : eqs_) {
      if (eq.block < 0) {
        std::vector<Code> row(na + 1, zf_.zero());
        for (const auto& t : eq.terms) {
          const std::size_t col = t.lvar < 0 ? na : static_cast<std::size_t>(t.lvar);
          row[col] = zf_.add(row[col], term_value(t));
        }
        affine_.push_back(std::move(row));
      } else {
        const std::size_t width = plan_.lblocks[eq.block].size();
        std::vector<Code> row(width, zf_.zero());
        for (const auto& t : eq.terms) row[t.lvar] = zf_.add(row[t.lvar], term_value(t));
        block_rows_[eq.block].push_back(std::move(row));
      }
    }
    // affine part: inconsistent iff a pivot lands in the constant column
    std::uint64_t count = 1;
    if (!affine_.empty()) {
      const std::size_t rank_full = rank_in_place(affine_, na + 1, zf_);
      std::size_t rank_coef = 0;
      for (const auto& row : affine_) {
        bool nonzero = false;
        for (std::size_t c = 0; c < na; ++c) nonzero = nonzero || !zf_.is_zero(row[c]);
        if (nonzero) ++rank_coef;
      }
      if (rank_full != rank_coef) return 0;
      count = checked_pow(q_, static_cast<unsigned>(na - rank_coef));
    } else {
      count = checked_pow(q_, static_cast<unsigned>(na));
    }
    for (std::size_t b = 0; b < plan_.lblocks.size(); ++b) {
      const std::size_t width = plan_.lblocks[b].size();
      const std::size_t rk = rank_in_place(block_rows_[b], width, zf_);
      const std::size_t kernel = width - rk;
      if (kernel == 0) return 0;
      count *= projective_size(q_, kernel);
    }
    return count;
  }

  const Plan& plan_;
  const std::vector<CompiledEq>& eqs_;
  const ZechField& zf_;
  std::uint64_t q_;
  std::vector<Code> vals_;
  std::vector<std::vector<Code>> affine_;
  std::vector<std::vector<std::vector<Code>>> block_rows_;
};

inline std::uint64_t count_with(const VarietyModel& m, const ZechField& zf, const CountOptions& opt,
                                bool force_exhaustive = false) {
  const Plan plan = make_plan(m, zf.size(), force_exhaustive);
  if (plan.candidates > opt.budget) throw BudgetExceeded(plan.candidates, opt.budget);
  const auto eqs = compile(m, plan, zf);
  const std::size_t nv = m.ambient.num_vars();
  const std::uint64_t outer = plan.eunits.empty() ? 1 : unit_size(plan.units[plan.eunits[0]], zf.size());
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, outer));
  std::vector<unsigned __int128> partial(threads, 0);
  auto chunk = [&](unsigned w) {
    const std::uint64_t b = outer * w / threads, e = outer * (w + 1) / threads;
    Worker worker(plan, eqs, zf, nv);
    partial[w] = worker.run(b, e);
  };
  if (threads <= 1) {
    chunk(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(chunk, w);
    for (auto& t : pool) t.join();
  }
  unsigned __int128 total = 0;
  for (auto v : partial) total += v;
  if (total > ~std::uint64_t{0}) throw DomainError("point count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

}  // namespace counter_detail

/// |X(F_q)| for the field f.
inline std::uint64_t count_points(const VarietyModel& model, const FieldDesc& f, const CountOptions& opt = {}) {
  if (auto diags = validate(model); !diags.empty()) throw DomainError("invalid model: " + diags.front().message);
  ZechField zf(f);
  return counter_detail::count_with(model, zf, opt);
}

/// Number of candidate tuples count_points would enumerate over a field of size q.
inline std::uint64_t count_cost(const VarietyModel& model, std::uint64_t q) {
  return counter_detail::make_plan(model, q).candidates;
}

/// Calls fn(point) for every F_q-point, projective factors normalized so the
/// first nonzero coordinate is 1. Exhaustive; budget caps the candidate count.
inline void for_each_point(const VarietyModel& model, const ZechField& zf, std::uint64_t budget,
                           const std::function<void(const std::vector<ZechField::Code>&)>& fn) {
  using namespace counter_detail;
  const std::uint64_t q = zf.size();
  const auto units = units_of(model.ambient);
  unsigned __int128 total = 1;
  std::vector<std::uint64_t> sizes;
  for (const auto& u : units) {
    sizes.push_back(unit_size(u, q));
    total *= sizes.back();
    if (total > budget) throw BudgetExceeded(total > ~std::uint64_t{0} ? ~std::uint64_t{0} : std::uint64_t(total), budget);
  }
  Plan plan = make_plan(model, q, true);
  const auto eqs = compile(model, plan, zf);
  std::vector<Code> vals(model.ambient.num_vars(), zf.zero());
  std::vector<std::uint64_t> digits(units.size(), 0);
  for (std::size_t i = 0; i < units.size(); ++i) assign_unit(units[i], 0, q, zf, vals);
  for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(total); ++t) {
    bool on = true;
    for (const auto& eq : eqs) {
      Code s = zf.zero();
      for (const auto& term : eq.terms) {
        Code v = term.coeff;
        for (const auto& [var, e] : term.factors) v = zf.mul(v, zf.pow(vals[var], e));
        s = zf.add(s, v);
      }
      if (!zf.is_zero(s)) {
        on = false;
        break;
      }
    }
    if (on) fn(vals);
    for (std::size_t i = units.size(); i-- > 0;) {
      if (++digits[i] < sizes[i]) {
        assign_unit(units[i], digits[i], q, zf, vals);
        break;
      }
      digits[i] = 0;
      assign_unit(units[i], 0, q, zf, vals);
    }
  }
}

namespace counter_detail {

/// Pivot variable of each projective factor at a normalized point.
inline std::vector<std::size_t> pivots_at(const AmbientSpace& amb, const std::vector<Code>& vals, const ZechField& zf) {
  std::vector<std::size_t> piv;
  for (std::size_t i = 0; i < amb.factors.size(); ++i) {
    if (!amb.factors[i].projective()) continue;
    auto [b, e] = amb.range(i);
    for (std::size_t v = b; v < e; ++v)
      if (!zf.is_zero(vals[v])) {
        piv.push_back(v);
        break;
      }
  }
  return piv;
}

inline Code eval_code(const Polynomial& poly, const std::vector<Code>& vals, const ZechField& zf) {
  Code s = zf.zero();
  for (const auto& [e, c] : poly.terms()) {
    Code v = zf.from_integer(c);
    for (std::size_t i = 0; i < e.size() && !zf.is_zero(v); ++i)
      if (e[i]) v = zf.mul(v, zf.pow(vals[i], e[i]));
    s = zf.add(s, v);
  }
  return s;
}

}  // namespace counter_detail

/// Flags F_q-points where the Jacobian, taken in the affine chart given by the
/// point's projective pivots, has rank below ambient dim - expected dim.
inline SmoothnessReport smoothness_scan(const VarietyModel& model, const FieldDesc& f, std::uint64_t budget = 100'000'000) {
  using namespace counter_detail;
  if (!model.expected_dim) throw DomainError("smoothness scan needs the model's expected dimension (dim statement)");
  const unsigned codim = model.ambient.dimension() - *model.expected_dim;
  const std::size_t nv = model.ambient.num_vars();
  std::vector<std::vector<Polynomial>> jac(model.equations.size());
  for (std::size_t j = 0; j < model.equations.size(); ++j)
    for (std::size_t v = 0; v < nv; ++v) jac[j].push_back(model.equations[j].derivative(v));
  ZechField zf(f);
  SmoothnessReport rep{f, 0, {}};
  for_each_point(model, zf, budget, [&](const std::vector<Code>& vals) {
    ++rep.points_checked;
    const auto piv = pivots_at(model.ambient, vals, zf);
    std::vector<std::size_t> chart;
    for (std::size_t v = 0; v < nv; ++v)
      if (std::find(piv.begin(), piv.end(), v) == piv.end()) chart.push_back(v);
    std::vector<std::vector<Code>> rows;
    for (std::size_t j = 0; j < jac.size(); ++j) {
      std::vector<Code> row;
      for (auto v : chart) row.push_back(eval_code(jac[j][v], vals, zf));
      rows.push_back(std::move(row));
    }
    const std::size_t rank = rank_in_place(rows, chart.size(), zf);
    if (rank < codim) {
      std::vector<FieldElement> pt;
      for (auto c : vals) pt.push_back(zf.to_element(c));
      rep.singular_points.push_back(std::move(pt));
    }
  });
  return rep;
}

inline PointCountTable count_tower(const VarietyModel& model, std::uint64_t p, unsigned k, unsigned r_max,
                                   const CountOptions& opt = {}, CountCache* cache = nullptr) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("extension degree must be >= 1");
  PointCountTable t;
  t.p = p;
  t.k = k;
  t.r_max = r_max;
  const std::string hash = model_hash(model);
  for (unsigned r = 1; r <= r_max; ++r) {
    if (cache) {
      if (auto hit = cache->get(hash, p, k, r)) {
        t.counts.push_back(*hit);
        continue;
      }
    }
    try {
      const FieldDesc f = make_field(p, k * r);
      const std::uint64_t n = count_points(model, f, opt);
      t.counts.push_back(n);
      if (cache) cache->put(CacheEntry{hash, p, k, r, n, kVersion});
    } catch (const BudgetExceeded& e) {
      t.truncation_reason = "level r=" + std::to_string(r) + ": " + e.what();
      break;
    } catch (const DomainError& e) {
      if (r == 1) throw;
      t.truncation_reason = "level r=" + std::to_string(r) + ": " + e.what();
      break;
    }
  }
  if (opt.scan_smoothness && model.expected_dim) {
    try {
      t.smooth_at_p = smoothness_scan(model, make_field(p, k), opt.budget).smooth();
    } catch (const BudgetExceeded&) {
      t.smooth_at_p.reset();
    }
  }
  return t;
}

}  // namespace weilkit

#endif  // WEILKIT_COUNTER_HPP
