#include <gtest/gtest.h>

#include "suites.hpp"
#include "totalimage/parse.hpp"

using namespace totalimage;

namespace {

Ideal ideal_of(const RingPtr &R, std::initializer_list<const char *> gens) {
  std::vector<Polynomial> g;
  for (auto *s : gens) g.push_back(parse_polynomial(s, R));
  return Ideal(R, std::move(g));
}

} // namespace

TEST(KernelSuite, GroebnerInvariants) {
  auto r = suite::gb_invariants(101, 15);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(KernelSuite, SaturationIdempotent) {
  auto r = suite::saturation_idempotence(102, 20);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(KernelSuite, EliminationSound) {
  auto r = suite::elimination_soundness(103, 15);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(Groebner, TwistedCubic) {
  auto R = make_ring({"t", "a", "b", "c"});
  Ideal I = ideal_of(R, {"a-t", "b-t^2", "c-t^3"});
  Ideal E = eliminate(I, 1);
  Ideal expect = ideal_of(R, {"b-a^2", "c-a*b", "a*c-b^2"});
  EXPECT_EQ(E, expect);
}

TEST(Groebner, UnitAndZero) {
  auto R = make_ring({"x", "y"});
  EXPECT_TRUE(ideal_of(R, {"x", "x-1"}).is_unit());
  EXPECT_FALSE(ideal_of(R, {"x*y", "x^2"}).is_unit());
  EXPECT_TRUE(Ideal(R).is_zero());
  EXPECT_EQ(Ideal(R).to_string(), "ideal()");
  EXPECT_EQ(ideal_of(R, {"2*x"}).to_string(), "ideal x");
  EXPECT_EQ(ideal_of(R, {"x", "x-1"}).to_string(), "ideal(1)");
}

TEST(Groebner, Membership) {
  auto R = make_ring({"x", "y", "z"});
  Ideal I = ideal_of(R, {"x^2-y", "y^2-z"});
  EXPECT_TRUE(ideal_contains(I, parse_polynomial("x^4-z", R)));
  EXPECT_FALSE(ideal_contains(I, parse_polynomial("x^3-z", R)));
  EXPECT_TRUE(radical_membership(parse_polynomial("x", R), ideal_of(R, {"x^3"})));
  EXPECT_FALSE(radical_membership(parse_polynomial("y", R), ideal_of(R, {"x^3"})));
}

TEST(Groebner, IntersectionAndQuotient) {
  auto R = make_ring({"x", "y"});
  Ideal I = ideal_of(R, {"x"}), J = ideal_of(R, {"y"});
  EXPECT_EQ(intersect(I, J), ideal_of(R, {"x*y"}));
  Ideal K = ideal_of(R, {"x*y", "x^2"});
  EXPECT_EQ(ideal_quotient(K, ideal_of(R, {"x"})), ideal_of(R, {"x", "y"}));
  EXPECT_EQ(saturate(K, ideal_of(R, {"x"})), Ideal::unit(R));
  EXPECT_EQ(saturate_var(ideal_of(R, {"x^2*y", "x*y^2"}), 0), ideal_of(R, {"y"}));
}

// Elements of the intersection lie in both ideals, at random points.
TEST(Groebner, IntersectionContainedInBoth) {
  auto R = make_ring({"x", "y", "z"});
  std::mt19937_64 rng(7);
  for (int n = 0; n < 10; ++n) {
    Ideal I = suite::random_ideal(R, rng, 2, 2, 2), J = suite::random_ideal(R, rng, 2, 2, 2);
    Ideal K = intersect(I, J);
    EXPECT_TRUE(ideal_subset(K, I));
    EXPECT_TRUE(ideal_subset(K, J));
    for (auto &g : I.gens())
      for (auto &h : J.gens()) EXPECT_TRUE(ideal_contains(K, g * h));
  }
}

TEST(Groebner, Dimension) {
  auto R = make_ring({"x", "y", "z"});
  EXPECT_EQ(dimension(Ideal(R)), 3);
  EXPECT_EQ(dimension(Ideal(R), Flavor::projective), 2);
  EXPECT_EQ(dimension(ideal_of(R, {"x*y", "x*z"})), 2);
  EXPECT_EQ(dimension(ideal_of(R, {"x", "y", "z"}), Flavor::projective), -1);
  EXPECT_EQ(dimension(ideal_of(R, {"x", "y", "z"})), 0);
  EXPECT_EQ(dimension(Ideal::unit(R)), -1);
}

TEST(Groebner, PairLimitThrows) {
  auto R = make_ring({"x", "y", "z", "w"});
  GbLimits saved = gb_limits();
  gb_limits().max_pairs = 2;
  Ideal I = ideal_of(R, {"x^3-y*z*w", "y^3-x*z*w", "z^3-x*y*w", "w^3-x*y*z"});
  EXPECT_THROW(I.gb(), ComputationLimit);
  gb_limits() = saved;
}

// The modular mode agrees with the rational one on a small example whose
// basis has coefficients far from the prime.
TEST(Groebner, ModularAgreesOnSmallExample) {
  auto R = make_ring({"t", "a", "b", "c"});
  Ideal I = ideal_of(R, {"a-t", "b-t^2", "c-t^3"});
  std::string rational = eliminate(I, 1).to_string();
  GbLimits saved = gb_limits();
  gb_limits().characteristic = 32003;
  Ideal I2 = ideal_of(R, {"a-t", "b-t^2", "c-t^3"});
  std::string modular = eliminate(I2, 1).to_string();
  gb_limits() = saved;
  EXPECT_EQ(rational, modular);
}

// Three generic conics have no common projective zero; two do.
TEST(Groebner, ProjectiveEmptinessModP) {
  auto R = make_ring({"x", "y", "z"});
  auto P = [&](const char *s) { return parse_polynomial(s, R); };
  EXPECT_TRUE(projectively_empty_mod_p(R, {P("x^2-y*z"), P("y^2-x*z+z^2"), P("z^2+x*y")}));
  EXPECT_FALSE(projectively_empty_mod_p(R, {P("x^2-y*z"), P("y^2-x*z")}));
  EXPECT_FALSE(projectively_empty_mod_p(R, {P("x*y"), P("y*z"), P("x*z")}));
  EXPECT_TRUE(projectively_empty_mod_p(R, {P("x"), P("y"), P("z")}));
}
