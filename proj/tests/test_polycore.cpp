#include <gtest/gtest.h>

#include "oracles.hpp"
#include "totalimage/factor.hpp"
#include "totalimage/parse.hpp"

using namespace totalimage;

namespace {

RingPtr xyz() { return make_ring({"x", "y", "z"}); }

std::vector<Rational> random_point(std::mt19937_64 &rng, std::size_t n) {
  std::vector<Rational> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(make_rational(uniform_int(rng, -9, 9), uniform_int(rng, 1, 4)));
  return p;
}

} // namespace

TEST(Parse, PrintsCanonically) {
  auto R = xyz();
  EXPECT_EQ(parse_polynomial("y*z + x^2 - 2*x*y", R).to_string(), "x^2-2*x*y+y*z");
  EXPECT_EQ(parse_polynomial("-(x - y)^2", R).to_string(), "-x^2+2*x*y-y^2");
  EXPECT_EQ(parse_polynomial("0", R).to_string(), "0");
  EXPECT_EQ(parse_polynomial("3/6*x", R).to_string(), "1/2*x");
}

TEST(Parse, RejectsBadInput) {
  auto R = xyz();
  for (const char *bad : {"x y", "2x", "x^", "x^-1", "w", "x +", "(x", "x)", "x**2"})
    EXPECT_THROW(parse_polynomial(bad, R), ParseError) << bad;
}

TEST(Parse, ReportsColumn) {
  auto R = xyz();
  try {
    parse_polynomial("x + w", R);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line, 1);
    EXPECT_EQ(e.column, 5);
  }
}

TEST(Parse, RoundTripsRandomPolynomials) {
  auto R = xyz();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Polynomial p = oracle::random_poly(R, rng, 5, 6);
    EXPECT_EQ(parse_polynomial(p.to_string(), R), p) << p.to_string();
  }
}

// Arithmetic against evaluation at random rational points.
TEST(Arithmetic, AgreesWithEvaluation) {
  auto R = xyz();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    Polynomial a = oracle::random_poly(R, rng, 4, 5), b = oracle::random_poly(R, rng, 4, 5);
    auto pt = random_point(rng, 3);
    EXPECT_EQ((a + b).eval(pt), a.eval(pt) + b.eval(pt));
    EXPECT_EQ((a - b).eval(pt), a.eval(pt) - b.eval(pt));
    EXPECT_EQ((a * b).eval(pt), a.eval(pt) * b.eval(pt));
    EXPECT_EQ(a.pow(3).eval(pt), a.eval(pt) * a.eval(pt) * a.eval(pt));
  }
}

TEST(Arithmetic, RingLaws) {
  auto R = xyz();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    Polynomial a = oracle::random_poly(R, rng, 3, 4), b = oracle::random_poly(R, rng, 3, 4),
               c = oracle::random_poly(R, rng, 3, 4);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Arithmetic, MixedRingsThrow) {
  auto R = xyz(), S = make_ring({"u"});
  EXPECT_THROW(Polynomial::variable(R, 0) + Polynomial::variable(S, 0), StructuralError);
}

TEST(Arithmetic, SubstitutionComposes) {
  auto R = xyz();
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    Polynomial p = oracle::random_poly(R, rng, 3, 4);
    std::vector<Polynomial> img;
    for (int j = 0; j < 3; ++j) img.push_back(oracle::random_poly(R, rng, 2, 3));
    auto pt = random_point(rng, 3);
    std::vector<Rational> ipt;
    for (auto &g : img) ipt.push_back(g.eval(pt));
    EXPECT_EQ(p.substitute(img, R).eval(pt), p.eval(ipt));
  }
}

TEST(Arithmetic, HomogenizeThenDehomogenize) {
  auto R = make_ring({"h", "x", "y"});
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    Polynomial p = oracle::random_poly(R, rng, 4, 5).specialize(0, 1);
    Polynomial h = p.homogenize(0);
    EXPECT_TRUE(h.is_homogeneous());
    EXPECT_EQ(h.dehomogenize(0), p);
  }
}

TEST(Arithmetic, DerivativeProductRule) {
  auto R = xyz();
  std::mt19937_64 rng(16);
  for (int i = 0; i < 50; ++i) {
    Polynomial a = oracle::random_poly(R, rng, 3, 4), b = oracle::random_poly(R, rng, 3, 4);
    EXPECT_EQ((a * b).derivative(1), a.derivative(1) * b + a * b.derivative(1));
  }
}

TEST(Factor, KnownFactorizations) {
  auto R = make_ring({"x", "y"});
  auto f = factor(parse_polynomial("x^4-y^4", R));
  EXPECT_EQ(f.factors.size(), 3u);
  EXPECT_TRUE(f.complete);
  auto g = irreducible_factors(parse_polynomial("x^2-2", R));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(irreducible_factors(parse_polynomial("x^2*y-y^3", R)).size(), 3u);
}

// Product of the factors with multiplicity reproduces the input.
TEST(Factor, ProductReproducesInput) {
  auto R = xyz();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    Polynomial a = oracle::random_poly(R, rng, 2, 3), b = oracle::random_poly(R, rng, 2, 3);
    if (a.is_constant() || b.is_constant()) continue;
    Polynomial p = a * a * b;
    auto f = factor(p);
    Polynomial prod = Polynomial::constant(R, f.unit);
    for (auto &[q, e] : f.factors) prod = prod * q.pow(unsigned(e));
    EXPECT_EQ(prod, p) << p.to_string();
    // a*a divides p, so some factor has multiplicity at least two.
    int top = 0;
    for (auto &[q, e] : f.factors) top = std::max(top, e);
    EXPECT_GE(top, 2);
  }
}

// Same principal ideal means equal up to a nonzero scalar.
TEST(Factor, GcdOfKnownProducts) {
  auto R = make_ring({"a", "b", "c", "d"});
  auto P = [&](const char *s) { return parse_polynomial(s, R); };
  std::mt19937_64 rng(19);
  for (int i = 0; i < 20; ++i) {
    Polynomial g = oracle::random_poly(R, rng, 2, 3), u = oracle::random_poly(R, rng, 2, 3),
               v = oracle::random_poly(R, rng, 2, 3);
    if (g.is_constant() || u.is_constant() || v.is_constant()) continue;
    Polynomial h = poly_gcd(g * u, g * v);
    // u and v may share a factor, so only divisibility by g is certain.
    EXPECT_TRUE(ideal_subset(Ideal(R, {h}), Ideal(R, {g}))) << h.to_string();
    EXPECT_TRUE(ideal_subset(Ideal(R, {g * u, g * v}), Ideal(R, {h})));
  }
  EXPECT_EQ(Ideal(R, {poly_gcd(P("(a-b)^2*(c+d)"), P("(a-b)*(c-d)"))}), Ideal(R, {P("a-b")}));
  EXPECT_TRUE(poly_gcd(P("a*b+c"), P("c*d+a")).is_constant());
}

TEST(Factor, RepeatedFactorsInSeveralVariables) {
  auto R = make_ring({"a", "b", "e", "f"});
  auto f = factor(parse_polynomial("(e^2-f^2)^2*(a^2-b^2)", R));
  EXPECT_TRUE(f.complete);
  std::vector<std::pair<std::string, int>> got;
  for (auto &[q, e] : f.factors) got.push_back({Ideal(R, {q}).to_string(), e});
  std::sort(got.begin(), got.end());
  std::vector<std::pair<std::string, int>> want;
  for (auto *s : {"a-b", "a+b"}) want.push_back({Ideal(R, {parse_polynomial(s, R)}).to_string(), 1});
  for (auto *s : {"e-f", "e+f"}) want.push_back({Ideal(R, {parse_polynomial(s, R)}).to_string(), 2});
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(Factor, LineRestrictionCertifiesOnlyIrreducibles) {
  auto R = xyz();
  std::mt19937_64 rng(23);
  EXPECT_TRUE(detail::irreducible_on_a_line(parse_polynomial("x^3+y^3+z^3", R), rng));
  EXPECT_FALSE(detail::irreducible_on_a_line(parse_polynomial("(x+y)*(x-z)", R), rng));
  EXPECT_FALSE(detail::irreducible_on_a_line(parse_polynomial("x^2*y-z^3+x*(x-y)^2", R) * parse_polynomial("z-1", R), rng));
}

TEST(Rational, UniformIntIsInRange) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    long v = uniform_int(rng, -3, 4);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 4);
  }
}
