#ifndef WEILKIT_FFIELD_HPP
#define WEILKIT_FFIELD_HPP

// Finite fields F_{p^k} as F_p[x]/(m(x)) with dense coefficient vectors.
//
// This is the reference arithmetic. Hot loops (point counting) use the table
// driven ZechField from zech.hpp, which is built from a FieldDesc and checked
// against this implementation in the tests.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "weilkit/common.hpp"

namespace weilkit {

namespace modp {

// Polynomials over F_p, coefficient of x^i at index i, trimmed (no trailing
// zeros). The zero polynomial is the empty vector.
using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  // p prime, a != 0 mod p
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

inline Poly rem(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv(m.back(), p);
  while (!a.empty() && a.size() - 1 >= dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint64_t c = mulmod(a.back(), lead_inv, p);
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t li = inv(a.back(), p);
    for (auto& c : a) c = mulmod(c, li, p);
  }
  return a;
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

/// Rabin's test: monic m of degree k is irreducible iff x^{p^k} = x mod m and
/// gcd(x^{p^{k/l}} - x, m) = 1 for every prime l dividing k.
inline bool is_irreducible(const Poly& m, std::uint64_t p) {
  const std::size_t k = m.size() - 1;
  if (k == 0) return false;
  if (k == 1) return true;
  const Poly x{0, 1};
  // frob[d] = x^{p^d} mod m
  std::vector<Poly> frob{rem(x, m, p)};
  for (std::size_t d = 1; d <= k; ++d) frob.push_back(powmod(frob.back(), p, m, p));
  if (sub(frob[k], rem(x, m, p), p) != Poly{}) return false;
  for (std::uint64_t l : prime_factors(k)) {
    Poly g = gcd(m, sub(frob[k / l], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace modp

/// Explicit model of F_{p^k}. For k > 1 `modulus` holds the monic irreducible
/// (k+1 coefficients, constant term first); for k == 1 it is empty.
struct FieldDesc {
  std::uint64_t p = 2;
  unsigned k = 1;
  std::vector<std::uint64_t> modulus;

  std::uint64_t size() const { return checked_pow(p, k); }
  bool operator==(const FieldDesc&) const = default;
};

struct FieldElement {
  std::vector<std::uint64_t> coeffs;  // length k, each in [0, p)
  bool operator==(const FieldElement&) const = default;
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](auto c) { return c == 0; });
  }
};

/// Builds F_{p^k}. For k > 1 the modulus is the smallest monic irreducible when
/// monic degree-k polynomials are ordered by (c_{k-1}, ..., c_0)
/// lexicographically; this gives x^3+x+1 for F_8.
inline FieldDesc make_field(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("extension degree must be >= 1");
  FieldDesc f{p, k, {}};
  if (k == 1) return f;
  const std::uint64_t count = checked_pow(p, k);
  modp::Poly m(k + 1, 0);
  m[k] = 1;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t v = idx;
    for (unsigned j = 0; j < k; ++j) {
      m[j] = v % p;
      v /= p;
    }
    if (m[0] == 0) continue;
    if (modp::is_irreducible(m, p)) {
      f.modulus = m;
      return f;
    }
  }
  throw DomainError("no irreducible polynomial found");  // unreachable
}

inline bool is_valid_field(const FieldDesc& f) {
  if (!is_prime(f.p) || f.k < 1) return false;
  if (f.k == 1) return f.modulus.empty();
  if (f.modulus.size() != f.k + 1 || f.modulus.back() != 1) return false;
  for (auto c : f.modulus)
    if (c >= f.p) return false;
  return modp::is_irreducible(f.modulus, f.p);
}

inline FieldElement field_zero(const FieldDesc& f) { return FieldElement{std::vector<std::uint64_t>(f.k, 0)}; }

inline FieldElement field_from_integer(const Integer& n, const FieldDesc& f) {
  FieldElement e = field_zero(f);
  e.coeffs[0] = mod_of(n, f.p);
  return e;
}

inline FieldElement field_one(const FieldDesc& f) { return field_from_integer(1, f); }

/// The generator x of F_p[x]/(m); equals the integer 0 in a prime field.
inline FieldElement field_generator(const FieldDesc& f) {
  FieldElement e = field_zero(f);
  if (f.k > 1) e.coeffs[1] = 1;
  return e;
}

/// Index of an element in enumeration order: sum of c_i p^i.
inline std::uint64_t element_index(const FieldElement& a, const FieldDesc& f) {
  std::uint64_t idx = 0;
  for (unsigned i = f.k; i-- > 0;) idx = idx * f.p + a.coeffs[i];
  return idx;
}

inline FieldElement element_at(std::uint64_t idx, const FieldDesc& f) {
  FieldElement e = field_zero(f);
  for (unsigned i = 0; i < f.k; ++i) {
    e.coeffs[i] = idx % f.p;
    idx /= f.p;
  }
  return e;
}

enum class FieldOp { add, sub, mul, div };

namespace detail {

inline FieldElement mul_elements(const FieldElement& a, const FieldElement& b, const FieldDesc& f) {
  const std::uint64_t p = f.p;
  if (f.k == 1) return FieldElement{{mulmod(a.coeffs[0], b.coeffs[0], p)}};
  std::vector<std::uint64_t> prod(2 * f.k - 1, 0);
  for (unsigned i = 0; i < f.k; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (unsigned j = 0; j < f.k; ++j) prod[i + j] = (prod[i + j] + mulmod(a.coeffs[i], b.coeffs[j], p)) % p;
  }
  // monic modulus: x^k = -(m_0 + ... + m_{k-1} x^{k-1})
  for (std::size_t d = prod.size(); d-- > f.k;) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    const std::size_t shift = d - f.k;
    for (unsigned i = 0; i < f.k; ++i) prod[shift + i] = (prod[shift + i] + p - mulmod(c, f.modulus[i], p)) % p;
  }
  prod.resize(f.k);
  return FieldElement{std::move(prod)};
}

}  // namespace detail

inline FieldElement field_pow(FieldElement base, std::uint64_t e, const FieldDesc& f) {
  FieldElement r = field_one(f);
  while (e) {
    if (e & 1) r = detail::mul_elements(r, base, f);
    base = detail::mul_elements(base, base, f);
    e >>= 1;
  }
  return r;
}

inline FieldElement arith(const FieldElement& a, const FieldElement& b, FieldOp op, const FieldDesc& f) {
  const std::uint64_t p = f.p;
  switch (op) {
    case FieldOp::add: {
      FieldElement r = a;
      for (unsigned i = 0; i < f.k; ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % p;
      return r;
    }
    case FieldOp::sub: {
      FieldElement r = a;
      for (unsigned i = 0; i < f.k; ++i) r.coeffs[i] = (a.coeffs[i] + p - b.coeffs[i]) % p;
      return r;
    }
    case FieldOp::mul:
      return detail::mul_elements(a, b, f);
    case FieldOp::div: {
      if (b.is_zero()) throw DomainError("division by zero");
      // b^{q-2} = b^{-1}
      return detail::mul_elements(a, field_pow(b, f.size() - 2, f), f);
    }
  }
  throw DomainError("unknown field operation");
}

inline FieldElement field_neg(const FieldElement& a, const FieldDesc& f) { return arith(field_zero(f), a, FieldOp::sub, f); }

inline std::vector<FieldElement> enumerate_elements(const FieldDesc& f) {
  const std::uint64_t q = f.size();
  std::vector<FieldElement> out;
  out.reserve(q);
  for (std::uint64_t i = 0; i < q; ++i) out.push_back(element_at(i, f));
  return out;
}

/// Arithmetic Frobenius a -> a^p.
inline FieldElement frobenius(const FieldElement& a, const FieldDesc& f) { return field_pow(a, f.p, f); }

/// Prime-field elements print as integers, others as "[c0,c1,...]".
inline std::string to_string(const FieldElement& a, const FieldDesc& f) {
  if (f.k == 1) return std::to_string(a.coeffs[0]);
  std::string out = "[";
  for (unsigned i = 0; i < f.k; ++i) out += (i ? "," : "") + std::to_string(a.coeffs[i]);
  return out + "]";
}

}  // namespace weilkit

#endif  // WEILKIT_FFIELD_HPP
