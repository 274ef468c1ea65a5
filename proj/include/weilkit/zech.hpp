#ifndef WEILKIT_ZECH_HPP
#define WEILKIT_ZECH_HPP

#include <cstdint>
#include <vector>

#include "weilkit/common.hpp"
#include "weilkit/ffield.hpp"

namespace weilkit {

/// F_q with elements stored as discrete logarithms to a fixed primitive root g
/// and addition through Zech logarithms, 1 + g^n = g^{Z(n)}.
///
/// Codes 0 .. q-2 stand for g^code; code q-1 is zero. Every code in [0, q)
/// is therefore an element, which lets enumeration run over plain integers.
class ZechField {
 public:
  using Code = std::uint32_t;

  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 24;

  explicit ZechField(const FieldDesc& f) : desc_(f), q_(f.size()), order_(q_ - 1) {
    if (q_ > kMaxSize) throw DomainError("field of size " + std::to_string(q_) + " is too large for table arithmetic");
    zero_ = static_cast<Code>(order_);
    const FieldElement g = find_primitive();
    exp_idx_.resize(order_);
    log_.assign(q_, zero_);
    FieldElement cur = field_one(f);
    for (std::uint64_t i = 0; i < order_; ++i) {
      const std::uint64_t idx = element_index(cur, f);
      exp_idx_[i] = idx;
      log_[idx] = static_cast<Code>(i);
      cur = detail::mul_elements(cur, g, f);
    }
    // zech_[n] = log(1 + g^n)
    zech_.resize(order_);
    const FieldElement one = field_one(f);
    for (std::uint64_t n = 0; n < order_; ++n) {
      FieldElement s = arith(one, element_at(exp_idx_[n], f), FieldOp::add, f);
      zech_[n] = log_[element_index(s, f)];
    }
    half_ = (f.p == 2) ? 0 : static_cast<Code>(order_ / 2);
    small_.resize(f.p);
    for (std::uint64_t c = 0; c < f.p; ++c) small_[c] = log_[c];
  }

  const FieldDesc& desc() const { return desc_; }
  std::uint64_t size() const { return q_; }
  Code zero() const { return zero_; }
  Code one() const { return 0; }
  bool is_zero(Code a) const { return a == zero_; }

  Code mul(Code a, Code b) const {
    if (a == zero_ || b == zero_) return zero_;
    std::uint64_t s = std::uint64_t{a} + b;
    if (s >= order_) s -= order_;
    return static_cast<Code>(s);
  }

  Code add(Code a, Code b) const {
    if (a == zero_) return b;
    if (b == zero_) return a;
    std::uint64_t d = b >= a ? b - a : b + order_ - a;
    const Code z = zech_[d];
    if (z == zero_) return zero_;
    std::uint64_t s = std::uint64_t{a} + z;
    if (s >= order_) s -= order_;
    return static_cast<Code>(s);
  }

  Code neg(Code a) const {
    if (a == zero_) return zero_;
    std::uint64_t s = std::uint64_t{a} + half_;
    if (s >= order_) s -= order_;
    return static_cast<Code>(s);
  }

  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  Code inv(Code a) const {
    if (a == zero_) throw DomainError("division by zero");
    return a == 0 ? 0 : static_cast<Code>(order_ - a);
  }

  Code pow(Code a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a == zero_) return zero_;
    return static_cast<Code>(static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * e) % order_));
  }

  Code from_integer(const Integer& n) const { return small_[mod_of(n, desc_.p)]; }
  Code from_small(std::uint64_t n) const { return small_[n % desc_.p]; }

  FieldElement to_element(Code a) const {
    return a == zero_ ? field_zero(desc_) : element_at(exp_idx_[a], desc_);
  }
  Code from_element(const FieldElement& e) const { return log_[element_index(e, desc_)]; }

  /// Residue in [0, p) of a prime-field element.
  std::uint64_t to_residue(Code a) const { return a == zero_ ? 0 : exp_idx_[a] % desc_.p; }

 private:
  FieldElement find_primitive() const {
    if (q_ == 2) return field_one(desc_);
    const auto factors = prime_factors(order_);
    for (std::uint64_t idx = 2; idx < q_; ++idx) {
      FieldElement g = element_at(idx, desc_);
      bool primitive = true;
      for (auto l : factors) {
        if (field_pow(g, order_ / l, desc_) == field_one(desc_)) {
          primitive = false;
          break;
        }
      }
      if (primitive) return g;
    }
    throw DomainError("no primitive element");  // unreachable for a field
  }

  FieldDesc desc_;
  std::uint64_t q_;
  std::uint64_t order_;
  Code zero_ = 0;
  Code half_ = 0;
  std::vector<std::uint64_t> exp_idx_;
  std::vector<Code> log_;
  std::vector<Code> zech_;
  std::vector<Code> small_;
};

}  // namespace weilkit

#endif  // WEILKIT_ZECH_HPP
