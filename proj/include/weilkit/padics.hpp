#ifndef WEILKIT_PADICS_HPP
#define WEILKIT_PADICS_HPP

// p-adic absolute values and integration over Z_p^m, normalized so that
// Z_p^m has measure 1. Two independent engines: exact gauge-form integration
// by residue disks, and interval-bounded cell refinement of |f|_p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "weilkit/common.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/polynomial.hpp"

namespace weilkit {

/// p^v * u with u a unit known modulo p^(N-v); `v` empty means zero to precision N.
struct PAdicScalar {
  std::uint64_t p = 2;
  unsigned N = 1;
  std::optional<unsigned> v;
  Integer unit = 0;
  bool zero_to_precision() const { return !v; }
};

inline PAdicScalar padic_from_integer(const Integer& x, std::uint64_t p, unsigned N) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (N < 1) throw DomainError("precision must be >= 1");
  const Integer PN = ipow(Integer(p), N);
  Integer r = x % PN;
  if (r < 0) r += PN;
  PAdicScalar s{p, N, std::nullopt, 0};
  if (r == 0) return s;
  unsigned v = 0;
  while (r % p == 0) {
    r /= p;
    ++v;
  }
  s.v = v;
  s.unit = r % ipow(Integer(p), N - v);
  return s;
}

/// Normalized valuation of a nonzero rational.
inline int valuation(const Rational& x, std::uint64_t p) {
  if (x == 0) throw DomainError("valuation of 0 is infinite");
  int v = 0;
  Integer n = boost::multiprecision::numerator(x), d = boost::multiprecision::denominator(x);
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

/// |x|_p = p^(-v(x)), |0|_p = 0.
inline Rational padic_abs(const Rational& x, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (x == 0) return Rational(0);
  return rpow(Rational(Integer(p)), -valuation(x, p));
}

struct PAdicAbs {
  Rational value;
  bool upper_bound = false;  // true for zero-to-precision scalars: |x| <= value
};

inline PAdicAbs padic_abs(const PAdicScalar& x) {
  if (x.zero_to_precision()) return {rpow(Rational(Integer(x.p)), -static_cast<int>(x.N)), true};
  return {rpow(Rational(Integer(x.p)), -static_cast<int>(*x.v)), false};
}

/// center + p^N Z_p^m.
struct Cell {
  std::uint64_t p = 2;
  unsigned N = 0;
  std::vector<Integer> center;
  Rational measure() const {
    return rpow(Rational(Integer(p)), -static_cast<int>(N * center.size()));
  }
};

struct IntegralBound {
  Rational lo = 0;
  Rational hi = 0;
  unsigned level = 0;
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// v(lhs(x)) >= v(rhs(x)) + offset.
struct ValuationConstraint {
  Polynomial lhs;
  Polynomial rhs;
  int offset = 0;
};

struct ResidueDisk {
  std::vector<std::uint64_t> point;   // F_p-point at the center
  std::vector<std::size_t> solved;    // Hensel-solved variables (unit Jacobian minor)
  std::vector<std::size_t> params;    // remaining coordinates
  Cell cell;                          // level-1 cell of the ambient containing the disk
};

struct DiskCertificate {
  std::vector<std::uint64_t> point;
  std::string chart;                  // gauge chart id, or "residue" for the canonical generator
};

struct GaugeIntegral {
  Rational value;
  std::uint64_t disks = 0;
  unsigned n = 0;
  bool canonical_lattice = false;     // no gauge charts: the residue form itself
  std::vector<DiskCertificate> certificates;
};

namespace padic_detail {

/// Polynomial with coefficients reduced modulo M, for fast evaluation.
struct ModPoly {
  struct Term {
    std::uint64_t coeff;
    std::vector<std::pair<std::size_t, std::uint32_t>> powers;
  };
  std::uint64_t M = 1;
  std::vector<Term> terms;

  ModPoly() = default;
  ModPoly(const Polynomial& f, std::uint64_t mod) : M(mod) {
    for (const auto& [e, c] : f.terms()) {
      Term t{mod_of(c, mod), {}};
      if (t.coeff == 0) continue;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) t.powers.emplace_back(i, e[i]);
      terms.push_back(std::move(t));
    }
  }

  std::uint64_t eval(const std::vector<std::uint64_t>& x) const {
    std::uint64_t acc = 0;
    for (const auto& t : terms) {
      std::uint64_t v = t.coeff;
      for (auto [i, k] : t.powers)
        for (std::uint32_t j = 0; j < k && v; ++j) v = mulmod(v, x[i], M);
      acc += v;
      if (acc >= M) acc -= M;
    }
    return acc;
  }
};

inline std::uint64_t det_mod(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  const std::size_t n = a.size();
  std::uint64_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] % p == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = (p - det) % p;
    }
    det = mulmod(det, a[c][c], p);
    std::uint64_t inv = 1, base = a[c][c], e = p - 2;
    for (; e; e >>= 1, base = mulmod(base, base, p))
      if (e & 1) inv = mulmod(inv, base, p);
    for (std::size_t r = c + 1; r < n; ++r) {
      const std::uint64_t f = mulmod(a[r][c], inv, p);
      for (std::size_t k = c; k < n; ++k) a[r][k] = (a[r][k] + p - mulmod(f, a[c][k], p)) % p;
    }
  }
  return det;
}

inline std::string point_string(const std::vector<std::uint64_t>& pt) {
  std::string s = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? "," : "") + std::to_string(pt[i]);
  return s + ")";
}

/// Is the minor of the Jacobian on `cols` a unit mod p at `pt`?
inline bool unit_minor(const std::vector<std::vector<ModPoly>>& jac, const std::vector<std::size_t>& cols,
                       const std::vector<std::uint64_t>& pt, std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> a(jac.size());
  for (std::size_t r = 0; r < jac.size(); ++r)
    for (auto c : cols) a[r].push_back(jac[r][c].eval(pt));
  return det_mod(std::move(a), p) != 0;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(s.begin(), s.end(), i) == s.end()) out.push_back(i);
  return out;
}

inline bool next_subset(std::vector<std::size_t>& s, std::size_t n) {
  const std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Per-exponent counters: a cell contributing p^(-e) adds one at index e.
struct Tally {
  std::vector<std::uint64_t> lo, hi;
  explicit Tally(std::size_t n = 0) : lo(n, 0), hi(n, 0) {}
  void merge(const Tally& o) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] += o.lo[i];
      hi[i] += o.hi[i];
    }
  }
};

struct Refiner {
  std::uint64_t p;
  unsigned N;
  std::size_t m;
  std::vector<std::uint64_t> pw;  // p^0 .. p^N
  ModPoly f;
  std::vector<std::pair<ModPoly, ModPoly>> cons;
  std::vector<int> offsets;

  /// valuation of val modulo p^level, or nullopt when val = 0 mod p^level
  std::optional<unsigned> vknown(std::uint64_t val, unsigned level) const {
    const std::uint64_t r = val % pw[level];
    if (r == 0) return std::nullopt;
    unsigned v = 0;
    std::uint64_t x = r;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }

  // 1 true, 0 false, -1 undetermined
  int constraint(std::size_t i, const std::vector<std::uint64_t>& c, unsigned level) const {
    const auto L = vknown(cons[i].first.eval(c), level);
    const auto R = vknown(cons[i].second.eval(c), level);
    const long o = offsets[i];
    if (L && R) return static_cast<long>(*L) >= static_cast<long>(*R) + o ? 1 : 0;
    if (L) return static_cast<long>(*L) < static_cast<long>(level) + o ? 0 : -1;
    if (R) return static_cast<long>(level) >= static_cast<long>(*R) + o ? 1 : -1;
    return -1;
  }

  void visit(std::vector<std::uint64_t>& c, unsigned level, Tally& t) const {
    bool undetermined = false;
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const int s = constraint(i, c, level);
      if (s == 0) return;
      if (s < 0) undetermined = true;
    }
    const auto fv = vknown(f.eval(c), level);
    if (!undetermined && fv) {
      t.lo[*fv + m * level] += 1;
      t.hi[*fv + m * level] += 1;
      return;
    }
    if (level == N) {
      t.hi[(fv ? *fv : N) + m * N] += 1;
      return;
    }
    refine(c, level, t, 0, 1);
  }

  /// Visit the children of the cell c (mod p^level), optionally only those
  /// with child index = start mod stride.
  void refine(std::vector<std::uint64_t>& c, unsigned level, Tally& t, std::uint64_t start,
              std::uint64_t stride) const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= p;
    const std::vector<std::uint64_t> base = c;
    for (std::uint64_t idx = start; idx < total; idx += stride) {
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < m; ++i) {
        c[i] = base[i] + (v % p) * pw[level];
        v /= p;
      }
      visit(c, level + 1, t);
    }
    c = base;
  }
};

}  // namespace padic_detail

/// One disk per F_p-point of an affine model presented by c equations in
/// m variables (dimension n = m - c). Each disk records the first (lex) set of
/// c variables whose Jacobian minor is a unit at the center.
inline std::vector<ResidueDisk> residue_disks(const VarietyModel& model, std::uint64_t p,
                                              std::uint64_t budget = 100'000'000) {
  using namespace padic_detail;
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (!model.ambient.all_affine()) throw DomainError("residue disks need an affine ambient");
  const std::size_t m = model.ambient.num_vars();
  const std::size_t c = model.equations.size();
  if (c > m) throw DomainError("more equations than variables");
  if (model.expected_dim && *model.expected_dim != m - c)
    throw DomainError("model is not presented as a complete intersection: dim " +
                      std::to_string(*model.expected_dim) + " but " + std::to_string(m) + " variables and " +
                      std::to_string(c) + " equations");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (total > budget / p) throw BudgetExceeded(total * p, budget);
    total *= p;
  }
  std::vector<ModPoly> eqs;
  std::vector<std::vector<ModPoly>> jac(c);
  for (std::size_t j = 0; j < c; ++j) {
    eqs.emplace_back(model.equations[j], p);
    for (std::size_t v = 0; v < m; ++v) jac[j].emplace_back(model.equations[j].derivative(v), p);
  }
  std::vector<ResidueDisk> out;
  std::vector<std::uint64_t> pt(m, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t v = idx;
    for (std::size_t i = 0; i < m; ++i) {
      pt[i] = v % p;
      v /= p;
    }
    bool on = true;
    for (const auto& e : eqs) on = on && e.eval(pt) == 0;
    if (!on) continue;
    std::vector<std::size_t> cols(c);
    for (std::size_t i = 0; i < c; ++i) cols[i] = i;
    bool found = c == 0;
    while (!found) {
      if (unit_minor(jac, cols, pt, p)) {
        found = true;
        break;
      }
      if (!next_subset(cols, m)) break;
    }
    if (!found)
      throw SingularPoint("singular F_" + std::to_string(p) + "-point " + point_string(pt) +
                          ": no Jacobian minor is a unit, so the disk has no regular system of parameters");
    ResidueDisk d;
    d.point = pt;
    d.solved = cols;
    d.params = complement(m, cols);
    d.cell.p = p;
    d.cell.N = 1;
    for (auto x : pt) d.cell.center.emplace_back(x);
    out.push_back(std::move(d));
  }
  return out;
}

/// Integral of |omega|_p over X(Z_p). A gauge chart (id, coords, h) stands for
/// omega = h * d(coords) / det(d eqs / d(other variables)). Each disk is
/// certified by a chart whose minor and numerator are units at the center;
/// then the disk contributes exactly p^(-n). Charts valid at the same center
/// must agree on whether h is a unit there (the transition is a unit).
/// Without charts the canonical generator (h = 1) is integrated.
inline GaugeIntegral integrate_gauge(const VarietyModel& model, std::uint64_t p) {
  using namespace padic_detail;
  for (const auto& d : validate(model)) throw DomainError("invalid model: " + d.message);
  const auto disks = residue_disks(model, p);
  const std::size_t m = model.ambient.num_vars();
  const std::size_t c = model.equations.size();
  std::vector<std::vector<ModPoly>> jac(c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t v = 0; v < m; ++v) jac[j].emplace_back(model.equations[j].derivative(v), p);

  GaugeIntegral gi;
  gi.n = static_cast<unsigned>(m - c);
  gi.canonical_lattice = model.gauge_charts.empty();
  for (const auto& d : disks) {
    if (gi.canonical_lattice) {
      gi.certificates.push_back({d.point, "residue"});
      continue;
    }
    std::optional<std::string> certified;
    std::optional<std::string> failing;
    for (const auto& ch : model.gauge_charts) {
      if (!unit_minor(jac, complement(m, ch.coords), d.point, p)) continue;
      const bool h_unit = ModPoly(ch.numerator, p).eval(d.point) != 0;
      if (h_unit && !certified) certified = ch.id;
      if (!h_unit && !failing) failing = ch.id;
    }
    if (certified && failing)
      throw DomainError("transition between gauge charts '" + *certified + "' and '" + *failing +
                        "' is not a unit at " + point_string(d.point));
    if (failing)
      throw DomainError("gauge coefficient of chart '" + *failing + "' is not a p-adic unit on the disk over " +
                        point_string(d.point));
    if (!certified) throw DomainError("no gauge chart covers the disk over " + point_string(d.point));
    gi.certificates.push_back({d.point, *certified});
  }
  gi.disks = disks.size();
  gi.value = Rational(Integer(gi.disks), ipow(Integer(p), gi.n));
  return gi;
}

/// Bracket for the integral of |f|_p over {x in Z_p^m : region}, refining
/// cells down to level N. A cell is settled once f has a nonzero digit below
/// its level and every constraint is decided; cells still open at level N
/// contribute [0, p^-j * measure] where p^j is the best known divisor of f.
inline IntegralBound integrate_abs_numeric(const Polynomial& f, std::size_t m, std::uint64_t p, unsigned N,
                                           const std::vector<ValuationConstraint>& region = {},
                                           unsigned threads = 1) {
  using namespace padic_detail;
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (N < 1) throw DomainError("level must be >= 1");
  if (f.nvars() != m) throw DomainError("integrand has " + std::to_string(f.nvars()) + " variables, expected " +
                                        std::to_string(m));
  Refiner R{p, N, m, {}, {}, {}, {}};
  R.pw.push_back(1);
  for (unsigned i = 0; i < N; ++i) R.pw.push_back(checked_pow(p, i + 1));
  if (R.pw[N] > (std::uint64_t{1} << 62)) throw DomainError("p^N too large for the interval engine");
  R.f = ModPoly(f, R.pw[N]);
  for (const auto& c : region) {
    if (c.lhs.nvars() != m || c.rhs.nvars() != m) throw DomainError("region constraint has wrong variable count");
    R.cons.emplace_back(ModPoly(c.lhs, R.pw[N]), ModPoly(c.rhs, R.pw[N]));
    R.offsets.push_back(c.offset);
  }
  const std::size_t slots = N + m * N + 1;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<Tally> tallies(threads, Tally(slots));
  if (threads == 1) {
    std::vector<std::uint64_t> c(m, 0);
    R.visit(c, 0, tallies[0]);
  } else {
    // the root cell is never settled at level 0 (everything is 0 mod 1), so
    // split its children across workers
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        std::vector<std::uint64_t> c(m, 0);
        R.refine(c, 0, tallies[t], t, threads);
      });
    for (auto& th : pool) th.join();
  }
  for (std::size_t t = 1; t < tallies.size(); ++t) tallies[0].merge(tallies[t]);
  Integer lo = 0, hi = 0;
  const Integer P(p);
  for (std::size_t e = 0; e < slots; ++e) {
    const Integer w = ipow(P, static_cast<unsigned>(slots - 1 - e));
    lo += w * tallies[0].lo[e];
    hi += w * tallies[0].hi[e];
  }
  const Integer den = ipow(P, static_cast<unsigned>(slots - 1));
  return IntegralBound{Rational(lo, den), Rational(hi, den), N};
}

/// Independent oracle for integrate_gauge on an affine model: the tube
/// {v(g_j) >= N for all equations} scaled by p^(cN), integrating |h| for the
/// first chart's numerator h (1 when there are no charts).
inline IntegralBound gauge_oracle(const VarietyModel& model, std::uint64_t p, unsigned N, unsigned threads = 1) {
  if (!model.ambient.all_affine()) throw DomainError("gauge oracle needs an affine ambient");
  const std::size_t m = model.ambient.num_vars();
  std::vector<ValuationConstraint> tube;
  for (const auto& g : model.equations)
    tube.push_back({g, Polynomial::constant(m, 1), static_cast<int>(N)});
  const Polynomial h = model.gauge_charts.empty() ? Polynomial::constant(m, 1) : model.gauge_charts.front().numerator;
  auto b = integrate_abs_numeric(h, m, p, N, tube, threads);
  const Rational scale(ipow(Integer(p), static_cast<unsigned>(model.equations.size() * N)));
  b.lo *= scale;
  b.hi *= scale;
  return b;
}

struct ChangeOfVarsReport {
  IntegralBound lhs;   // integral of |det D phi| over the source region
  IntegralBound rhs;   // measure of the target region
  bool compatible = false;
};

/// Change of variables for a polynomial map phi: Z_p^m -> Z_p^m that the
/// caller asserts is injective off a null set and maps the source region onto
/// the target region.
inline ChangeOfVarsReport change_of_vars_check(const std::vector<Polynomial>& phi,
                                               const std::vector<ValuationConstraint>& target_region, std::uint64_t p,
                                               unsigned N, const std::vector<ValuationConstraint>& source_region = {}) {
  const std::size_t m = phi.size();
  for (const auto& c : phi)
    if (c.nvars() != m) throw DomainError("map components must have as many variables as components");
  ChangeOfVarsReport rep;
  rep.lhs = integrate_abs_numeric(jacobian_determinant(phi), m, p, N, source_region);
  rep.rhs = integrate_abs_numeric(Polynomial::constant(m, 1), m, p, N, target_region);
  rep.compatible = rep.lhs.lo <= rep.rhs.hi && rep.rhs.lo <= rep.lhs.hi;
  return rep;
}

}  // namespace weilkit

#endif  // WEILKIT_PADICS_HPP
