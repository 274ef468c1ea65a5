#ifndef WEILKIT_POLYNOMIAL_HPP
#define WEILKIT_POLYNOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weilkit/common.hpp"

namespace weilkit {

using Exponents = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with integer coefficients over a fixed
/// number of variables. Terms are kept in descending lexicographic order of
/// their exponent vectors; zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Integer, std::greater<Exponents>>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Integer& c) {
    Polynomial r(nvars);
    if (c != 0) r.terms_[Exponents(nvars, 0)] = c;
    return r;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i, std::uint32_t exp = 1) {
    Polynomial r(nvars);
    Exponents e(nvars, 0);
    e.at(i) = exp;
    r.terms_[e] = 1;
    return r;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponents& e, const Integer& c) {
    if (e.size() != nvars_) throw DomainError("exponent vector length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compat(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_compat(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compat(b);
    Polynomial r(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(nvars_, 1);
    for (unsigned i = 0; i < n; ++i) r *= *this;
    return r;
  }

  Polynomial scaled(const Integer& s) const {
    Polynomial r(nvars_);
    if (s == 0) return r;
    for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
    return r;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      r.add_term(d, c * e[var]);
    }
    return r;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (auto x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  /// Degree in the variables [begin, end) if every term has the same degree
  /// there, nullopt otherwise. The zero polynomial is homogeneous of degree 0.
  std::optional<unsigned> block_degree(std::size_t begin, std::size_t end) const {
    std::optional<unsigned> deg;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (std::size_t i = begin; i < end; ++i) s += e[i];
      if (deg && *deg != s) return std::nullopt;
      deg = s;
    }
    return deg.value_or(0);
  }

  bool uses_variable(std::size_t var) const {
    for (const auto& [e, c] : terms_)
      if (e[var] != 0) return true;
    return false;
  }

  /// Substitutes polynomials (all in the same number of variables) for each
  /// variable of this polynomial.
  Polynomial compose(const std::vector<Polynomial>& subs) const {
    if (subs.size() != nvars_) throw DomainError("composition arity mismatch");
    const std::size_t m = subs.empty() ? 0 : subs.front().nvars();
    Polynomial r(m);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(m, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) t *= subs[i].pow(e[i]);
      r += t;
    }
    return r;
  }

  /// Value modulo m (m < 2^63) at an integer point given by residues.
  std::uint64_t eval_mod(std::span<const std::uint64_t> point, std::uint64_t m) const {
    if (point.size() != nvars_) throw DomainError("evaluation arity mismatch");
    std::uint64_t acc = 0;
    for (const auto& [e, c] : terms_) {
      std::uint64_t t = mod_of(c, m);
      for (std::size_t i = 0; i < nvars_ && t; ++i)
        for (std::uint32_t k = 0; k < e[i]; ++k) t = mulmod(t, point[i] % m, m);
      acc = (acc + t) % m;
    }
    return acc;
  }

  Integer eval(std::span<const Integer> point) const {
    if (point.size() != nvars_) throw DomainError("evaluation arity mismatch");
    Integer acc = 0;
    for (const auto& [e, c] : terms_) {
      Integer t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) t *= ipow(point[i], e[i]);
      acc += t;
    }
    return acc;
  }

  /// Canonical text form using the given variable names, e.g. "x*t - z*s".
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Integer mag = c < 0 ? Integer(-c) : c;
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += names.at(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        out += mag.str();
      } else if (mag == 1) {
        out += mono;
      } else {
        out += mag.str() + "*" + mono;
      }
    }
    return out;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  void check_compat(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw DomainError("polynomial variable count mismatch");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Determinant of a square matrix of polynomials by cofactor expansion.
inline Polynomial determinant(const std::vector<std::vector<Polynomial>>& mat, std::size_t nvars) {
  const std::size_t n = mat.size();
  if (n == 0) return Polynomial::constant(nvars, 1);
  if (n == 1) return mat[0][0];
  Polynomial det(nvars);
  for (std::size_t col = 0; col < n; ++col) {
    if (mat[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(mat[r][c]);
      minor.push_back(std::move(row));
    }
    Polynomial term = mat[0][col] * determinant(minor, nvars);
    if (col % 2) det -= term;
    else det += term;
  }
  return det;
}

/// Jacobian determinant of a polynomial map given by its components.
inline Polynomial jacobian_determinant(const std::vector<Polynomial>& components) {
  const std::size_t m = components.size();
  const std::size_t nvars = m ? components.front().nvars() : 0;
  if (nvars != m) throw DomainError("jacobian determinant needs a square map");
  std::vector<std::vector<Polynomial>> mat(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mat[i].push_back(components[i].derivative(j));
  return determinant(mat, nvars);
}

}  // namespace weilkit

#endif  // WEILKIT_POLYNOMIAL_HPP
