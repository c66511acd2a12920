#include <gtest/gtest.h>

#include "suites.hpp"
#include "totalimage/decompose.hpp"
#include "totalimage/parse.hpp"

using namespace totalimage;

namespace {

Ideal ideal_of(const RingPtr &R, std::initializer_list<const char *> gens) {
  std::vector<Polynomial> g;
  for (auto *s : gens) g.push_back(parse_polynomial(s, R));
  return Ideal(R, std::move(g));
}

std::vector<std::string> names(const std::vector<Ideal> &v) {
  std::vector<std::string> out;
  for (auto &I : v) out.push_back(I.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

// V(I) = union of V(P): every P contains I, and the product of the primes
// lies in the radical of I.
void expect_decomposition(const Ideal &I, const std::vector<Ideal> &primes) {
  ASSERT_FALSE(primes.empty());
  Polynomial prod = Polynomial::constant(I.ring(), 1);
  for (auto &P : primes) EXPECT_TRUE(ideal_subset(I, P)) << P.to_string();
  // For each generator choice of the primes, the product vanishes on V(I).
  std::function<void(std::size_t, Polynomial)> rec = [&](std::size_t i, Polynomial acc) {
    if (i == primes.size()) {
      EXPECT_TRUE(radical_membership(acc, I)) << acc.to_string();
      return;
    }
    for (auto &g : primes[i].gb()) rec(i + 1, acc * g);
  };
  rec(0, prod);
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = 0; j < primes.size(); ++j)
      if (i != j) {
        EXPECT_FALSE(ideal_subset(primes[i], primes[j])) << "not minimal";
      }
}

} // namespace

TEST(Decompose, CoordinateAxes) {
  auto R = make_ring({"x", "y", "z"});
  Ideal I = ideal_of(R, {"x*y", "y*z", "x*z"});
  auto p = minimal_primes(I);
  EXPECT_EQ(names(p), (std::vector<std::string>{"ideal(y,x)", "ideal(z,x)", "ideal(z,y)"}));
  expect_decomposition(I, p);
}

TEST(Decompose, EmbeddedComponentIgnored) {
  auto R = make_ring({"x", "y"});
  Ideal I = ideal_of(R, {"x^2", "x*y"});
  auto p = minimal_primes(I);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], ideal_of(R, {"x"}));
}

TEST(Decompose, TwistedCubicIsPrime) {
  auto R = make_ring({"a", "b", "c"});
  Ideal I = ideal_of(R, {"b-a^2", "c-a*b", "a*c-b^2"});
  auto c = minimal_primes_ex(I);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].certified);
  EXPECT_EQ(c[0].dim, 1);
  EXPECT_EQ(is_irreducible(I).verdict, Irreducible::yes);
}

// Both generators irreducible, yet the ideal splits over Q(sqrt 2).
TEST(Decompose, IrreducibleGeneratorsReducibleIdeal) {
  auto R = make_ring({"x", "y"});
  Ideal I = ideal_of(R, {"x^2-2", "y^2-2"});
  auto p = minimal_primes(I);
  EXPECT_EQ(p.size(), 2u);
  expect_decomposition(I, p);
  EXPECT_EQ(is_irreducible(I).verdict, Irreducible::no);
}

TEST(Decompose, UnitIdealHasNoComponents) {
  auto R = make_ring({"x"});
  EXPECT_TRUE(minimal_primes(ideal_of(R, {"x", "x-1"})).empty());
}

TEST(Decompose, RandomProductsOfLinearIdeals) {
  auto R = make_ring({"x", "y", "z", "w"});
  std::mt19937_64 rng(31);
  for (int n = 0; n < 10; ++n) {
    // Intersection of two random linear subspaces of codimension 2.
    auto lin = [&] { return oracle::random_poly(R, rng, 1, 4) + Polynomial::variable(R, std::size_t(n % 4)); };
    Ideal A(R, {lin(), lin()}), B(R, {lin(), lin()});
    if (A.is_unit() || B.is_unit() || A == B) continue;
    Ideal I = intersect(A, B);
    auto p = minimal_primes(I);
    auto got = names(p);
    auto want = names({A, B});
    EXPECT_EQ(got, want);
  }
}

TEST(Decompose, CurveUnion) {
  auto R = make_ring({"x", "y", "z"});
  Ideal I = ideal_of(R, {"(y-x^2)*(z-1)", "(y-x^2)*(x-z)"});
  auto p = minimal_primes(I);
  EXPECT_EQ(p.size(), 2u);
  expect_decomposition(I, p);
}
