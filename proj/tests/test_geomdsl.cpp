#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "test_support.hpp"
#include "weilkit/geomdsl.hpp"

using namespace weilkit;

namespace {

std::vector<std::string> bundled_models() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(WEILKIT_DEFAULT_MODELS_DIR))
    if (e.path().extension() == ".vty") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

Polynomial random_poly(std::size_t nvars, std::mt19937_64& rng) {
  Polynomial f(nvars);
  std::uniform_int_distribution<int> nterms(1, 4), ex(0, 3), coef(-20, 20);
  for (int t = nterms(rng); t > 0; --t) {
    Exponents e(nvars);
    for (auto& x : e) x = static_cast<std::uint32_t>(ex(rng));
    f.add_term(e, coef(rng));
  }
  return f;
}

}  // namespace

TEST(Parse, AffinePlaneCurve) {
  const auto m = parse_variety("ambient A^2; vars x,y; eq y - x^2");
  ASSERT_EQ(m.ambient.factors.size(), 1u);
  EXPECT_FALSE(m.ambient.factors[0].projective());
  EXPECT_EQ(m.ambient.num_vars(), 2u);
  ASSERT_EQ(m.equations.size(), 1u);
  EXPECT_EQ(m.equations[0].to_string(m.ambient.names), "-x^2 + y");
  EXPECT_TRUE(validate(m).empty());
}

TEST(Parse, ConifoldSmallResolution) {
  const auto m = parse_variety("ambient A^4 x P^1; vars x,y,z,w | s,t; dim 3; eq x*t - z*s; eq w*t - y*s");
  ASSERT_EQ(m.ambient.factors.size(), 2u);
  EXPECT_EQ(m.ambient.factors[0].dim, 4u);
  EXPECT_TRUE(m.ambient.factors[1].projective());
  EXPECT_EQ(m.ambient.num_vars(), 6u);
  EXPECT_EQ(m.ambient.dimension(), 5u);
  ASSERT_EQ(m.equations.size(), 2u);
  EXPECT_EQ(m.equations[0].to_string(m.ambient.names), "x*t - z*s");
  EXPECT_EQ(m.equations[1].to_string(m.ambient.names), "-y*s + w*t");
  EXPECT_TRUE(validate(m).empty());
  auto bundled = test::model("conifold_res1");
  bundled.name.clear();
  EXPECT_EQ(m, bundled);
}

TEST(Parse, DanglingExponentIsSyntaxError) {
  try {
    parse_variety("ambient A^2; vars x,y\neq y - x^");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 10u);
    EXPECT_NE(std::string(e.what()).find("exponent"), std::string::npos);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_variety("ambient A^2; vars x,y; eq y - u"), ParseError);      // unknown variable
  EXPECT_THROW(parse_variety("ambient A^2; vars x,y; eq y - 1.5*x"), ParseError);  // non-integer
  EXPECT_THROW(parse_variety("ambient A^2; vars x,y; eq y - x/2"), ParseError);
  EXPECT_THROW(parse_variety("ambient A^2; eq x"), ParseError);
  EXPECT_THROW(parse_variety("vars x"), ParseError);
  EXPECT_THROW(parse_variety("ambient B^2; vars x,y"), ParseError);
  EXPECT_THROW(parse_variety("ambient A^2; vars x,y; frobnicate"), ParseError);
  try {
    parse_variety("ambient A^1; vars x; eq x - 2.0");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-integer coefficient"), std::string::npos);
  }
  try {
    parse_variety("ambient A^1; vars x; eq x - q");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown variable"), std::string::npos);
  }
}

TEST(Parse, CommentsNewlinesAndParentheses) {
  const auto a = parse_variety("# plane\nambient A^2\nvars x,y   # names\n\neq (x + y)^2 - 2*x*y - x^2\n");
  const auto b = parse_variety("ambient A^2; vars x,y; eq y^2");
  EXPECT_EQ(a, b);
}

TEST(Validate, HomogeneousLinearFormInP2) {
  EXPECT_TRUE(validate(parse_variety("ambient P^2; vars x,y,z; eq x + y + z")).empty());
}

TEST(Validate, InhomogeneousEquationInP2) {
  const auto d = validate(parse_variety("ambient P^2; vars x,y,z; eq x^2 + y"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].message.find("not homogeneous in projective block"), std::string::npos);
}

TEST(Validate, GaugeChartArity) {
  const auto d = validate(parse_variety("ambient A^3; vars x,y,z; dim 2; gauge c x,y,z 1"));
  ASSERT_FALSE(d.empty());
  EXPECT_NE(d[0].message.find("lists 3 coordinates but dim is 2"), std::string::npos);
}

TEST(Validate, GaugeChartsNeedAffineAmbientAndDim) {
  EXPECT_FALSE(validate(parse_variety("ambient P^1; vars x,y; dim 1; gauge c x 1")).empty());
  EXPECT_FALSE(validate(parse_variety("ambient A^1; vars x; gauge c x 1")).empty());
}

TEST(Validate, BundledModelsAreValid) {
  const auto names = bundled_models();
  EXPECT_GE(names.size(), 10u);
  for (const auto& n : names) EXPECT_TRUE(validate(test::model(n)).empty()) << n;
}

TEST(EvaluatePoly, Examples) {
  const auto f7 = make_field(7, 1);
  const auto par = parse_variety("ambient A^2; vars x,y; eq y - x^2");
  auto pt = [](std::initializer_list<std::uint64_t> xs, const FieldDesc& f) {
    std::vector<FieldElement> v;
    for (auto x : xs) v.push_back(field_from_integer(x, f));
    return v;
  };
  EXPECT_EQ(evaluate_poly(par.equations[0], pt({2, 4}, f7), f7), field_zero(f7));
  EXPECT_EQ(evaluate_poly(par.equations[0], pt({2, 5}, f7), f7), field_one(f7));
  const auto f3 = make_field(3, 1);
  const auto con = test::model("conifold");
  EXPECT_EQ(evaluate_poly(con.equations[0], pt({1, 1, 1, 1}, f3), f3), field_zero(f3));
  EXPECT_THROW(evaluate_poly(con.equations[0], pt({1, 1}, f3), f3), DomainError);
}

TEST(EvaluatePoly, ReducesCoefficientsModP) {
  const auto f5 = make_field(5, 1);
  const auto m = parse_variety("ambient A^1; vars x; eq 10*x + 7");
  EXPECT_EQ(evaluate_poly(m.equations[0], {field_from_integer(3, f5)}, f5), field_from_integer(2, f5));
}

// Properties

TEST(RoundTrip, BundledModels) {
  for (const auto& n : bundled_models()) {
    const auto m = test::model(n);
    EXPECT_EQ(parse_variety(print_variety(m)), m) << n;
    EXPECT_EQ(model_hash(parse_variety(print_variety(m, false))), model_hash(m)) << n;
  }
}

TEST(RoundTrip, RandomPolynomials) {
  std::mt19937_64 rng(test::kSeed);
  for (int trial = 0; trial < 200; ++trial) {
    VarietyModel m;
    m.ambient.factors = {{AmbientFactor::Kind::affine, 3}};
    m.ambient.names = {"x", "y", "z"};
    m.equations = {random_poly(3, rng), random_poly(3, rng)};
    EXPECT_EQ(parse_variety(print_variety(m)), m) << print_variety(m);
  }
}

TEST(ModelHash, IgnoresFormattingAndName) {
  const auto a = parse_variety("name foo; ambient A^2; vars x,y; eq y - x^2");
  const auto b = parse_variety("ambient A^2\nvars x , y\neq  -x*x + y   # same curve\n");
  EXPECT_EQ(model_hash(a), model_hash(b));
  EXPECT_NE(model_hash(a), model_hash(parse_variety("ambient A^2; vars x,y; eq y - x^3")));
}

TEST(EvaluatePoly, RingHomomorphismOnRandomInputs) {
  std::mt19937_64 rng(test::kSeed + 7);
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{5, 1}, {2, 3}, {3, 2}, {7, 2}}) {
    const auto f = make_field(p, k);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_poly(3, rng), b = random_poly(3, rng);
      std::vector<FieldElement> pt;
      for (int i = 0; i < 3; ++i) pt.push_back(element_at(rng() % f.size(), f));
      EXPECT_EQ(evaluate_poly(a + b, pt, f),
                arith(evaluate_poly(a, pt, f), evaluate_poly(b, pt, f), FieldOp::add, f));
      EXPECT_EQ(evaluate_poly(a * b, pt, f),
                arith(evaluate_poly(a, pt, f), evaluate_poly(b, pt, f), FieldOp::mul, f));
    }
  }
}

TEST(Homogeneity, ScalingAProjectiveFactorPreservesMembership) {
  std::mt19937_64 rng(test::kSeed + 11);
  for (const auto& name : {"ell5", "ell5_shift", "conifold_res1", "conifold_res2", "bl0"}) {
    const auto m = test::model(name);
    ASSERT_TRUE(validate(m).empty());
    const auto f = make_field(5, 2);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<FieldElement> pt;
      for (std::size_t i = 0; i < m.ambient.num_vars(); ++i) pt.push_back(element_at(rng() % f.size(), f));
      for (std::size_t fi = 0; fi < m.ambient.factors.size(); ++fi) {
        if (!m.ambient.factors[fi].projective()) continue;
        const auto lambda = element_at(1 + rng() % (f.size() - 1), f);
        auto scaled = pt;
        auto [b, e] = m.ambient.range(fi);
        for (std::size_t v = b; v < e; ++v) scaled[v] = arith(lambda, scaled[v], FieldOp::mul, f);
        for (const auto& eq : m.equations)
          EXPECT_EQ(evaluate_poly(eq, pt, f).is_zero(), evaluate_poly(eq, scaled, f).is_zero()) << name;
      }
    }
  }
}
