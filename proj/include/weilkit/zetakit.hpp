#ifndef WEILKIT_ZETAKIT_HPP
#define WEILKIT_ZETAKIT_HPP

// Hasse-Weil zeta functions from point counts: exact power series, rational
// reconstruction, weight classification of reciprocal roots, Betti numbers
// and curve Hodge diamonds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weilkit/common.hpp"
#include "weilkit/counter.hpp"

namespace weilkit {

/// Truncated power series c_0 + c_1 t + ... + c_K t^K with exact coefficients.
struct PowerSeriesQ {
  std::vector<Rational> coeffs;
  unsigned order() const { return coeffs.empty() ? 0 : static_cast<unsigned>(coeffs.size() - 1); }
  bool operator==(const PowerSeriesQ&) const = default;
};

/// Reduced numerator/denominator, both with constant term 1.
struct RationalZeta {
  IntPoly numerator{1};
  IntPoly denominator{1};
  std::uint64_t q = 0;
  std::string method = "pade";  // "pade" or "curve"
  unsigned verified_terms = 0;  // series coefficients checked against the input
};

struct ReciprocalRoot {
  std::complex<double> value;
  bool in_numerator = false;
  int weight = -1;              // -1 when |alpha| fits no q^(i/2)
  bool parity_ok = false;
};

struct WeilFactorization {
  unsigned dim = 0;
  std::uint64_t q = 0;
  std::vector<ReciprocalRoot> roots;
  std::vector<unsigned> b;        // b_0 .. b_{2n}
  std::vector<IntPoly> factors;   // P_0 .. P_{2n}; exact when factors_exact
  bool purity_ok = false;
  bool factors_exact = false;
};

struct HodgeDiamond {
  unsigned n = 0;
  std::vector<std::vector<unsigned>> h;  // h[i][j] = h^{i,j}
  bool operator==(const HodgeDiamond&) const = default;
};

struct ZetaComparison {
  unsigned compared = 0;
  unsigned equal_through_r = 0;
  std::optional<unsigned> first_mismatch;
  bool equal() const { return !first_mismatch; }
};

namespace zeta_detail {

using QPoly = std::vector<Rational>;

inline void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  trim(a);
  if (deg(a) < deg(b)) return {{}, a};
  QPoly quo(a.size() - b.size() + 1, Rational(0));
  while (!a.empty() && deg(a) >= deg(b)) {
    const std::size_t s = a.size() - b.size();
    const Rational c = a.back() / b.back();
    quo[s] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  trim(quo);
  return {quo, a};
}

inline QPoly monic_gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

inline QPoly derivative(const QPoly& a) {
  QPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
  trim(d);
  return d;
}

inline QPoly to_q(const IntPoly& a) {
  QPoly r;
  for (const auto& c : a) r.emplace_back(c);
  trim(r);
  return r;
}

inline IntPoly to_int_normalized(QPoly a) {
  trim(a);
  if (a.empty() || a[0] == 0) throw DomainError("constant term vanishes");
  const Rational c0 = a[0];
  IntPoly out;
  for (auto& c : a) {
    c /= c0;
    if (boost::multiprecision::denominator(c) != 1)
      throw NoRationalMatch("reconstructed zeta has non-integer coefficients");
    out.push_back(boost::multiprecision::numerator(c));
  }
  return out;
}

inline IntPoly mul_int(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  return r;
}

/// Padé approximant num/den with deg num <= dn, deg den <= dd and
/// den*S = num mod t^(dn+dd+1), via the extended Euclidean algorithm.
inline std::optional<std::pair<QPoly, QPoly>> pade(const std::vector<Rational>& s, unsigned dn, unsigned dd) {
  const std::size_t M = dn + dd + 1;
  QPoly r0(M + 1, Rational(0));
  r0[M] = 1;
  QPoly r1(s.begin(), s.begin() + std::min(M, s.size()));
  trim(r1);
  QPoly v0{}, v1{Rational(1)};
  while (!r1.empty() && deg(r1) > static_cast<int>(dn)) {
    auto [quo, rem] = divmod(r0, r1);
    QPoly v2 = sub(v0, mul(quo, v1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    v0 = std::move(v1);
    v1 = std::move(v2);
  }
  if (deg(v1) > static_cast<int>(dd) || v1.empty() || v1[0] == 0) return std::nullopt;
  return std::make_pair(r1, v1);
}

/// Number of leading coefficients (from t^0) where num/den agrees with s.
inline std::size_t agreement(const QPoly& num, const QPoly& den, const std::vector<Rational>& s) {
  // den * s - num, coefficient by coefficient
  for (std::size_t j = 0; j < s.size(); ++j) {
    Rational acc = 0;
    for (std::size_t i = 0; i < den.size() && i <= j; ++i) acc += den[i] * s[j - i];
    if (j < num.size()) acc -= num[j];
    if (acc != 0) return j;
  }
  return s.size();
}

inline RationalZeta reduce(QPoly num, QPoly den, std::uint64_t q) {
  trim(num);
  trim(den);
  const QPoly g = monic_gcd(num, den);
  if (deg(g) > 0) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  RationalZeta z;
  z.numerator = to_int_normalized(num);
  z.denominator = to_int_normalized(den);
  z.q = q;
  return z;
}

/// Squarefree factorization (Yun) of a polynomial over Q: pairs (factor, multiplicity).
inline std::vector<std::pair<QPoly, unsigned>> squarefree(QPoly f) {
  std::vector<std::pair<QPoly, unsigned>> out;
  trim(f);
  if (deg(f) < 1) return out;
  QPoly a = monic_gcd(f, derivative(f));
  QPoly b = divmod(f, a).first;
  QPoly c = divmod(derivative(f), a).first;
  QPoly d = sub(c, derivative(b));
  unsigned i = 1;
  while (deg(b) > 0) {
    QPoly g = monic_gcd(b, d);
    if (g.empty()) g = b;
    if (deg(g) > 0) out.emplace_back(g, i);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = sub(c, derivative(b));
    ++i;
  }
  return out;
}

/// Roots of a squarefree polynomial: companion-matrix eigenvalues, then
/// Newton polishing in long double.
inline std::vector<std::complex<double>> roots(const QPoly& f) {
  const int n = deg(f);
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  std::vector<long double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(f[i] / f[n]);
  if (n == 1) {
    out.emplace_back(static_cast<double>(-c[0]), 0.0);
    return out;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = static_cast<double>(-c[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw RootFindingError("eigenvalue iteration did not converge");
  for (int i = 0; i < n; ++i) {
    std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    for (int it = 0; it < 60; ++it) {
      std::complex<long double> p = c[n], dp = 0;
      for (int j = n - 1; j >= 0; --j) {
        dp = dp * z + p;
        p = p * z + c[j];
      }
      if (std::abs(dp) == 0) break;
      const auto step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-18L * std::max<long double>(1, std::abs(z))) break;
    }
    std::complex<long double> p = c[n];
    for (int j = n - 1; j >= 0; --j) p = p * z + c[j];
    long double scale = 0;
    for (int j = 0; j <= n; ++j) scale += std::abs(c[j]) * std::pow(std::max<long double>(1, std::abs(z)), j);
    if (!std::isfinite(static_cast<double>(std::abs(z))) || std::abs(p) > 1e-9L * scale)
      throw RootFindingError("root refinement did not converge");
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

/// Reciprocal roots of a polynomial with constant term 1, with multiplicity.
inline std::vector<std::complex<double>> reciprocal_roots(const IntPoly& p) {
  QPoly rev = to_q(p);
  std::reverse(rev.begin(), rev.end());
  trim(rev);
  // rev(x) = x^d P(1/x); its roots are the reciprocal roots of P
  while (!rev.empty() && rev[0] == 0) rev.erase(rev.begin());
  std::vector<std::complex<double>> out;
  for (const auto& [factor, mult] : squarefree(rev))
    for (const auto& r : roots(factor))
      for (unsigned i = 0; i < mult; ++i) out.push_back(r);
  return out;
}

inline std::optional<IntPoly> round_product(const std::vector<std::complex<double>>& alphas) {
  std::vector<std::complex<long double>> prod{1.0L};
  for (const auto& a : alphas) {
    std::vector<std::complex<long double>> next(prod.size() + 1, 0.0L);
    for (std::size_t i = 0; i < prod.size(); ++i) {
      next[i] += prod[i];
      next[i + 1] -= prod[i] * std::complex<long double>(a.real(), a.imag());
    }
    prod = std::move(next);
  }
  IntPoly out;
  for (const auto& c : prod) {
    const long double r = std::round(c.real());
    if (std::fabs(r) > 9.0e15L || std::fabs(c.real() - r) > 1e-3L * std::max<long double>(1, std::fabs(r)) ||
        std::fabs(c.imag()) > 1e-3L * std::max<long double>(1, std::fabs(r)))
      return std::nullopt;
    out.emplace_back(static_cast<long long>(r));
  }
  return out;
}

inline unsigned ilog(std::uint64_t q, std::uint64_t p) {
  unsigned k = 0;
  while (q > 1) {
    q /= p;
    ++k;
  }
  return k;
}

}  // namespace zeta_detail

inline PowerSeriesQ zeta_from_counts(const std::vector<std::uint64_t>& counts) {
  PowerSeriesQ s;
  s.coeffs.push_back(Rational(1));
  for (std::size_t m = 1; m <= counts.size(); ++m) {
    Rational acc = 0;
    for (std::size_t r = 1; r <= m; ++r) acc += Rational(Integer(counts[r - 1])) * s.coeffs[m - r];
    s.coeffs.push_back(acc / static_cast<long>(m));
  }
  return s;
}

/// exp(sum_{r<=R} N_r t^r / r) truncated at t^R, via m c_m = sum_r N_r c_{m-r}.
inline PowerSeriesQ zeta_from_counts(const PointCountTable& table) { return zeta_from_counts(table.counts); }

/// Coefficients l_1..l_K of log(series); for a zeta series l_r = N_r / r.
inline std::vector<Rational> log_series(const PowerSeriesQ& s) {
  if (s.coeffs.empty() || s.coeffs[0] != 1) throw DomainError("log needs constant term 1");
  std::vector<Rational> l(s.coeffs.size(), Rational(0));
  for (std::size_t m = 1; m < s.coeffs.size(); ++m) {
    Rational acc = s.coeffs[m] * static_cast<long>(m);
    for (std::size_t r = 1; r < m; ++r) acc -= l[r] * static_cast<long>(r) * s.coeffs[m - r];
    l[m] = acc / static_cast<long>(m);
  }
  l.erase(l.begin());
  return l;
}

/// Series expansion of num/den through t^K.
inline PowerSeriesQ expand(const IntPoly& num, const IntPoly& den, unsigned K) {
  if (den.empty() || den[0] == 0) throw DomainError("denominator constant term vanishes");
  PowerSeriesQ s;
  for (unsigned j = 0; j <= K; ++j) {
    Rational acc = j < num.size() ? Rational(num[j]) : Rational(0);
    for (std::size_t i = 1; i < den.size() && i <= j; ++i) acc -= Rational(den[i]) * s.coeffs[j - i];
    s.coeffs.push_back(acc / Rational(den[0]));
  }
  return s;
}

/// Padé reconstruction. With bounds: the series must carry at least
/// d_num + d_den + guard terms beyond t^0. Without bounds the total degree is
/// grown from 0 and the first approximant that also matches `guard` further
/// coefficients is returned.
inline RationalZeta rational_reconstruct(const PowerSeriesQ& series, std::uint64_t q,
                                         std::optional<std::pair<unsigned, unsigned>> degree_bounds = std::nullopt,
                                         unsigned guard = 2) {
  using namespace zeta_detail;
  const unsigned K = series.order();
  auto attempt = [&](unsigned dn, unsigned dd) -> std::optional<RationalZeta> {
    auto pd = pade(series.coeffs, dn, dd);
    if (!pd) return std::nullopt;
    if (agreement(pd->first, pd->second, series.coeffs) != series.coeffs.size()) return std::nullopt;
    RationalZeta z = reduce(pd->first, pd->second, q);
    z.verified_terms = K;
    return z;
  };
  if (degree_bounds) {
    const auto [dn, dd] = *degree_bounds;
    if (K < dn + dd + guard)
      throw InsufficientTerms("insufficient terms: degrees (" + std::to_string(dn) + "," + std::to_string(dd) +
                              ") with guard " + std::to_string(guard) + " need " + std::to_string(dn + dd + guard) +
                              " coefficients, have " + std::to_string(K));
    if (auto z = attempt(dn, dd)) return *z;
    throw NoRationalMatch("no rational function with numerator degree <= " + std::to_string(dn) +
                          " and denominator degree <= " + std::to_string(dd) + " matches the series");
  }
  for (unsigned D = 0; D + guard <= K; ++D)
    for (unsigned dd = D + 1; dd-- > 0;)
      if (auto z = attempt(D - dd, dd)) return *z;
  throw InsufficientTerms("insufficient terms: no rational function of total degree <= " +
                          std::to_string(K >= guard ? K - guard : 0) + " matches " + std::to_string(K) +
                          " coefficients with " + std::to_string(guard) + " guard terms; raise --rmax");
}

/// Curve-shaped reconstruction: Z = P_1 / ((1-t)(1-qt)) with deg P_1 = 2g and
/// the functional equation a_{2g-i} = q^(g-i) a_i. The smallest g whose
/// prediction matches at least `guard` coefficients beyond a_1..a_g is used.
inline RationalZeta curve_reconstruct(const PowerSeriesQ& series, std::uint64_t q, unsigned guard = 1) {
  using namespace zeta_detail;
  const unsigned K = series.order();
  const QPoly den{Rational(1), Rational(-static_cast<long long>(q) - 1), Rational(static_cast<long long>(q))};
  QPoly a = mul(series.coeffs, den);
  a.resize(K + 1, Rational(0));
  for (const auto& c : a)
    if (boost::multiprecision::denominator(c) != 1) throw NoRationalMatch("curve numerator is not integral");
  for (unsigned g = 0; g + guard <= K; ++g) {
    QPoly P(2 * g + 1, Rational(0));
    for (unsigned i = 0; i <= g; ++i) {
      P[i] = a[i];
      P[2 * g - i] = a[i] * Rational(ipow(Integer(q), g - i));
    }
    bool ok = true;
    for (unsigned j = 0; j <= K && ok; ++j) ok = (j <= 2 * g ? P[j] : Rational(0)) == a[j];
    if (!ok) continue;
    RationalZeta z = reduce(P, den, q);
    z.method = "curve";
    z.verified_terms = K;
    return z;
  }
  throw InsufficientTerms("insufficient terms for curve reconstruction: " + std::to_string(K) +
                          " coefficients; raise --rmax");
}

/// Padé first; for curves (dim 1) fall back to the curve-shaped ansatz when
/// the table is too short for Padé.
inline RationalZeta reconstruct_zeta(const PointCountTable& table, std::optional<unsigned> dim) {
  const auto series = zeta_from_counts(table);
  try {
    return rational_reconstruct(series, table.q());
  } catch (const InsufficientTerms&) {
    if (dim && *dim == 1) return curve_reconstruct(series, table.q());
    throw;
  }
}

inline WeilFactorization weil_classify(const RationalZeta& z, unsigned dim, double tol = 1e-6) {
  using namespace zeta_detail;
  if (z.q < 2) throw DomainError("zeta has no field size");
  WeilFactorization w;
  w.dim = dim;
  w.q = z.q;
  w.b.assign(2 * dim + 1, 0);
  w.factors.assign(2 * dim + 1, IntPoly{1});
  const double lq = std::log(static_cast<double>(z.q));
  std::vector<std::vector<std::complex<double>>> buckets(2 * dim + 1);
  bool pure = true;
  for (int side = 0; side < 2; ++side) {
    const bool num = side == 0;
    for (const auto& alpha : reciprocal_roots(num ? z.numerator : z.denominator)) {
      ReciprocalRoot rr{alpha, num, -1, false};
      const double mag = std::abs(alpha);
      if (mag > 0) {
        const long wi = std::lround(2.0 * std::log(mag) / lq);
        const double target = std::pow(static_cast<double>(z.q), wi / 2.0);
        if (wi >= 0 && wi <= static_cast<long>(2 * dim) && std::fabs(mag - target) <= tol * target) {
          rr.weight = static_cast<int>(wi);
          rr.parity_ok = (wi % 2 == 1) == num;
        }
      }
      if (rr.weight < 0 || !rr.parity_ok) pure = false;
      if (rr.weight >= 0) {
        ++w.b[rr.weight];
        buckets[rr.weight].push_back(alpha);
      }
      w.roots.push_back(rr);
    }
  }
  w.purity_ok = pure;
  if (pure) {
    bool exact = true;
    for (unsigned i = 0; i <= 2 * dim && exact; ++i) {
      auto P = round_product(buckets[i]);
      if (!P) exact = false;
      else w.factors[i] = *P;
    }
    if (exact) {
      IntPoly num{1}, den{1};
      for (unsigned i = 0; i <= 2 * dim; ++i) (i % 2 ? num : den) = mul_int(i % 2 ? num : den, w.factors[i]);
      exact = num == z.numerator && den == z.denominator;
    }
    w.factors_exact = exact;
    if (!exact) w.factors.assign(2 * dim + 1, IntPoly{});
  }
  return w;
}

inline std::vector<unsigned> betti_numbers(const WeilFactorization& w) {
  if (!w.purity_ok) throw DomainError("purity_ok is false: reciprocal roots do not fit Weil weights");
  return w.b;
}

/// sum_i (-1)^i Tr(F^r | P_i) from the exact factors (power sums by Newton's identities).
inline Integer lefschetz_trace(const WeilFactorization& w, unsigned r) {
  if (!w.purity_ok || !w.factors_exact) throw DomainError("lefschetz trace needs exact pure factors");
  Integer total = 0;
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    const auto& c = w.factors[i];
    std::vector<Integer> ps(r + 1, Integer(0));
    for (unsigned m = 1; m <= r; ++m) {
      Integer v = m < c.size() ? Integer(-c[m] * m) : Integer(0);
      for (unsigned j = 1; j < m; ++j)
        if (j < c.size()) v -= c[j] * ps[m - j];
      ps[m] = v;
    }
    total += (i % 2 ? -ps[r] : ps[r]);
  }
  return total;
}

/// t^(2g) q^g P(1/(qt)) == P(t), i.e. a_{2g-j} q^j == a_j q^g for all j.
inline bool functional_equation_check(IntPoly P, std::uint64_t q, unsigned g) {
  while (P.size() > 1 && P.back() == 0) P.pop_back();
  if (P.size() != 2 * g + 1)
    throw DomainError("degree mismatch: polynomial has degree " + std::to_string(P.size() - 1) + ", expected " +
                      std::to_string(2 * g));
  const Integer Q(q);
  for (unsigned j = 0; j <= 2 * g; ++j)
    if (P[2 * g - j] * ipow(Q, j) != P[j] * ipow(Q, g)) return false;
  return true;
}

inline ZetaComparison compare_zeta(const PointCountTable& tx, const PointCountTable& ty) {
  if (tx.p != ty.p || tx.k != ty.k) throw DomainError("tables are over different base fields");
  ZetaComparison c;
  c.compared = static_cast<unsigned>(std::min(tx.counts.size(), ty.counts.size()));
  for (unsigned r = 0; r < c.compared; ++r) {
    if (tx.counts[r] != ty.counts[r]) {
      c.first_mismatch = r + 1;
      break;
    }
    c.equal_through_r = r + 1;
  }
  return c;
}

inline HodgeDiamond curve_hodge(const WeilFactorization& w) {
  if (w.dim != 1) throw DomainError("curve_hodge needs a curve (dim 1)");
  if (!w.purity_ok) throw DomainError("purity_ok is false");
  if (w.b.size() != 3 || w.b[1] % 2 != 0)
    throw DomainError("b_1 = " + std::to_string(w.b.size() > 1 ? w.b[1] : 0) +
                      " is odd: not the zeta function of a smooth proper curve");
  const unsigned g = w.b[1] / 2;
  return HodgeDiamond{1, {{1, g}, {g, 1}}};
}

inline unsigned genus(const HodgeDiamond& h) { return h.h.at(1).at(0); }

}  // namespace weilkit

#endif  // WEILKIT_ZETAKIT_HPP
