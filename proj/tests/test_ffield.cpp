#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"
#include "weilkit/ffield.hpp"
#include "weilkit/zech.hpp"

using namespace weilkit;

namespace {

// Monic degree-2 or degree-3 polynomial over F_p is irreducible iff it has no
// root in F_p. Used as an oracle for the modulus search.
bool has_root(const std::vector<std::uint64_t>& m, std::uint64_t p) {
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t acc = 0;
    for (std::size_t i = m.size(); i-- > 0;) acc = (acc * x + m[i]) % p;
    if (acc == 0) return true;
  }
  return false;
}

std::vector<std::uint64_t> lex_smallest_low_degree_irreducible(std::uint64_t p, unsigned k) {
  // Order by (c_{k-1}, ..., c_0), most significant first.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint64_t> m(k + 1, 0);
    m[k] = 1;
    std::uint64_t v = idx;
    for (unsigned j = 0; j < k; ++j) {
      m[j] = v % p;
      v /= p;
    }
    if (!has_root(m, p)) return m;
  }
  return {};
}

FieldElement random_element(const FieldDesc& f, std::mt19937_64& rng) {
  return element_at(std::uniform_int_distribution<std::uint64_t>(0, f.size() - 1)(rng), f);
}

const std::vector<std::pair<std::uint64_t, unsigned>> kFields = {{2, 1}, {7, 1}, {2, 3}, {3, 2}, {5, 2},
                                                                 {2, 5}, {3, 4}, {13, 1}, {11, 2}};

}  // namespace

TEST(MakeField, PrimeFieldHasNoModulus) {
  const auto f = make_field(5, 1);
  EXPECT_EQ(f.p, 5u);
  EXPECT_EQ(f.k, 1u);
  EXPECT_TRUE(f.modulus.empty());
  EXPECT_EQ(f.size(), 5u);
}

TEST(MakeField, F8ModulusIsLexSmallestIrreducibleCubic) {
  const auto oracle = lex_smallest_low_degree_irreducible(2, 3);
  ASSERT_EQ(oracle, (std::vector<std::uint64_t>{1, 1, 0, 1}));  // x^3 + x + 1
  EXPECT_EQ(make_field(2, 3).modulus, oracle);
}

TEST(MakeField, LowDegreeModuliMatchRootFreeOracle) {
  for (std::uint64_t p : {2, 3, 5, 7, 11}) {
    for (unsigned k : {2u, 3u}) {
      EXPECT_EQ(make_field(p, k).modulus, lex_smallest_low_degree_irreducible(p, k)) << "p=" << p << " k=" << k;
    }
  }
}

TEST(MakeField, RejectsBadArguments) {
  EXPECT_THROW(make_field(4, 1), DomainError);
  EXPECT_THROW(make_field(1, 1), DomainError);
  EXPECT_THROW(make_field(5, 0), DomainError);
  try {
    make_field(4, 1);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("not prime"), std::string::npos);
  }
}

TEST(MakeField, DeterministicAndValid) {
  for (auto [p, k] : kFields) {
    const auto a = make_field(p, k);
    const auto b = make_field(p, k);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(is_valid_field(a));
  }
}

TEST(Arith, PrimeFieldProduct) {
  const auto f = make_field(7, 1);
  EXPECT_EQ(arith(field_from_integer(3, f), field_from_integer(5, f), FieldOp::mul, f), field_one(f));
}

TEST(Arith, F8ReducesByModulus) {
  const auto f = make_field(2, 3);
  const auto x = field_generator(f);
  const auto x2 = arith(x, x, FieldOp::mul, f);
  EXPECT_EQ(x2, (FieldElement{{0, 0, 1}}));
  EXPECT_EQ(arith(x, x2, FieldOp::mul, f), (FieldElement{{1, 1, 0}}));  // x^3 = x + 1
}

TEST(Arith, DivisionByZeroThrows) {
  const auto f = make_field(5, 1);
  EXPECT_THROW(arith(field_one(f), field_zero(f), FieldOp::div, f), DomainError);
}

TEST(Enumerate, SmallFields) {
  const auto f2 = make_field(2, 1);
  const auto e2 = enumerate_elements(f2);
  ASSERT_EQ(e2.size(), 2u);
  EXPECT_EQ(e2[0], field_zero(f2));
  EXPECT_EQ(e2[1], field_one(f2));

  const auto f4 = make_field(2, 2);
  const auto e4 = enumerate_elements(f4);
  std::set<std::uint64_t> seen;
  for (const auto& e : e4) seen.insert(element_index(e, f4));
  EXPECT_EQ(seen.size(), 4u);

  const auto f9 = make_field(3, 2);
  auto sum = field_zero(f9);
  for (const auto& e : enumerate_elements(f9)) sum = arith(sum, e, FieldOp::add, f9);
  EXPECT_EQ(sum, field_zero(f9));
}

TEST(Enumerate, CardinalityAndDistinctness) {
  for (auto [p, k] : kFields) {
    const auto f = make_field(p, k);
    const auto all = enumerate_elements(f);
    ASSERT_EQ(all.size(), f.size());
    std::set<std::vector<std::uint64_t>> distinct;
    for (const auto& e : all) distinct.insert(e.coeffs);
    EXPECT_EQ(distinct.size(), f.size());
    EXPECT_EQ(all[0], field_zero(f));
    EXPECT_EQ(all[1], field_one(f));
  }
}

TEST(Frobenius, F4GeneratorGoesToGeneratorPlusOne) {
  const auto f = make_field(2, 2);
  ASSERT_EQ(f.modulus, (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(frobenius(field_generator(f), f), (FieldElement{{1, 1}}));
}

TEST(Frobenius, OrderAndFixedPoints) {
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 2}, {5, 2}, {2, 4}, {3, 3}}) {
    const auto f = make_field(p, k);
    std::uint64_t fixed = 0;
    for (const auto& a : enumerate_elements(f)) {
      auto b = a;
      for (unsigned i = 0; i < k; ++i) b = frobenius(b, f);
      EXPECT_EQ(b, a);
      if (frobenius(a, f) == a) ++fixed;
    }
    EXPECT_EQ(fixed, p) << "p=" << p << " k=" << k;
  }
}

TEST(FieldProperties, RingAxiomsInverseAndFrobeniusHomomorphism) {
  std::mt19937_64 rng(test::kSeed);
  for (auto [p, k] : kFields) {
    const auto f = make_field(p, k);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      auto add = [&](const auto& x, const auto& y) { return arith(x, y, FieldOp::add, f); };
      auto mul = [&](const auto& x, const auto& y) { return arith(x, y, FieldOp::mul, f); };
      EXPECT_EQ(add(a, b), add(b, a));
      EXPECT_EQ(mul(a, b), mul(b, a));
      EXPECT_EQ(add(add(a, b), c), add(a, add(b, c)));
      EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
      EXPECT_EQ(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
      EXPECT_EQ(arith(add(a, b), b, FieldOp::sub, f), a);
      if (!a.is_zero()) EXPECT_EQ(mul(a, arith(field_one(f), a, FieldOp::div, f)), field_one(f));
      EXPECT_EQ(frobenius(add(a, b), f), add(frobenius(a, f), frobenius(b, f)));
      EXPECT_EQ(frobenius(mul(a, b), f), mul(frobenius(a, f), frobenius(b, f)));
    }
  }
}

TEST(ZechField, AgreesWithDenseArithmeticExhaustively) {
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {5, 1}, {2, 3}, {3, 2}, {5, 2}, {2, 4}}) {
    const auto f = make_field(p, k);
    ZechField zf(f);
    const auto all = enumerate_elements(f);
    for (const auto& a : all) {
      const auto ca = zf.from_element(a);
      EXPECT_EQ(zf.to_element(ca), a);
      EXPECT_EQ(zf.to_element(zf.neg(ca)), field_neg(a, f));
      for (const auto& b : all) {
        const auto cb = zf.from_element(b);
        EXPECT_EQ(zf.to_element(zf.add(ca, cb)), arith(a, b, FieldOp::add, f));
        EXPECT_EQ(zf.to_element(zf.mul(ca, cb)), arith(a, b, FieldOp::mul, f));
      }
    }
  }
}

TEST(ZechField, AgreesWithDenseArithmeticOnRandomPairs) {
  std::mt19937_64 rng(test::kSeed + 1);
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{5, 4}, {3, 6}, {2, 10}, {11, 2}, {7, 3}}) {
    const auto f = make_field(p, k);
    ZechField zf(f);
    for (int trial = 0; trial < 500; ++trial) {
      const auto a = random_element(f, rng), b = random_element(f, rng);
      const auto ca = zf.from_element(a), cb = zf.from_element(b);
      EXPECT_EQ(zf.to_element(zf.add(ca, cb)), arith(a, b, FieldOp::add, f));
      EXPECT_EQ(zf.to_element(zf.mul(ca, cb)), arith(a, b, FieldOp::mul, f));
      EXPECT_EQ(zf.to_element(zf.pow(ca, 7)), field_pow(a, 7, f));
      if (!a.is_zero()) EXPECT_EQ(zf.to_element(zf.inv(ca)), arith(field_one(f), a, FieldOp::div, f));
    }
  }
}
