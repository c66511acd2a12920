#include <gtest/gtest.h>

#include "suites.hpp"
#include "totalimage/corpus.hpp"
#include "totalimage/parse.hpp"

using namespace totalimage;

TEST(MmTensor, TwoByTwoByTwo) {
  Tensor T = mm_tensor({2, 2, 2});
  EXPECT_EQ(T.shape, (std::vector<int>{4, 4, 4}));
  EXPECT_EQ(T.entries.size(), 8u);
  // e11 e11 e11, e11 e12 e21, ... with e_pq flattened to 2p+q.
  for (Index i : {Index{0, 0, 0}, Index{0, 1, 2}, Index{1, 2, 0}, Index{1, 3, 2}, Index{2, 0, 1}, Index{2, 1, 3},
                  Index{3, 2, 1}, Index{3, 3, 3}})
    EXPECT_EQ(T.at(i), 1);
}

TEST(MmTensor, SmallShapes) {
  Tensor one = mm_tensor({1, 1});
  EXPECT_EQ(one.entries.size(), 1u);
  EXPECT_EQ(one.at({0, 0}), 1);
  Tensor t23 = mm_tensor({2, 3});
  EXPECT_EQ(t23.entries.size(), 6u);
  EXPECT_EQ(mm_tensor({2, 3, 4}).entries.size(), 24u);
  EXPECT_THROW(mm_tensor({2}), PreconditionError);
}

TEST(ImpsTensor, IdentityTrace) {
  Matrix I3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  Tensor T = imps_tensor({I3}, 3);
  EXPECT_EQ(T.at({0, 0, 0}), 3);
}

TEST(ImpsTensor, OrbitIdentity) {
  auto r = suite::orbit_identity(201);
  EXPECT_TRUE(r.ok()) << r.summary();
  EXPECT_EQ(r.cases, 20);
}

TEST(ImpsTensor, CyclicSymmetry) {
  auto r = suite::cyclic_symmetry(202);
  EXPECT_TRUE(r.ok()) << r.summary();
}

// q = 2: a symmetric Gram-type matrix; its rank is bounded by r^2 since it
// factors through K^{r x r}.
TEST(ImpsTensor, QuadraticCaseSymmetricWithRankBound) {
  std::mt19937_64 rng(203);
  for (int n = 0; n < 10; ++n) {
    int r = 1 + n % 2, k = 5 + n % 3;
    std::vector<Matrix> M;
    for (int i = 0; i < k; ++i) M.push_back(suite::random_matrix(rng, std::size_t(r), std::size_t(r)));
    Tensor T = imps_tensor(M, 2);
    QMatrix m = flattening(T, 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) EXPECT_EQ(m[std::size_t(i)][std::size_t(j)], m[std::size_t(j)][std::size_t(i)]);
    EXPECT_LE(matrix_rank(m), r * r);
  }
}

TEST(MpsTensor, QuadraticCaseRankBound) {
  std::mt19937_64 rng(204);
  for (int n = 0; n < 10; ++n) {
    int a1 = 1 + n % 2, a2 = 1 + (n / 2) % 2, b1 = 6, b2 = 5;
    std::vector<std::vector<Matrix>> M(2);
    for (int i = 0; i < b1; ++i) M[0].push_back(suite::random_matrix(rng, std::size_t(a1), std::size_t(a2)));
    for (int i = 0; i < b2; ++i) M[1].push_back(suite::random_matrix(rng, std::size_t(a2), std::size_t(a1)));
    Tensor T = mps_tensor(M);
    EXPECT_LE(matrix_rank(flattening(T, 0)), a1 * a2);
  }
}

TEST(MpsTensor, OnesAndShapeErrors) {
  std::vector<std::vector<Matrix>> M(3, std::vector<Matrix>(2, Matrix{{1}}));
  Tensor T = mps_tensor(M);
  EXPECT_EQ(T.entries.size(), 8u);
  for (auto &[i, v] : T.entries) EXPECT_EQ(v, 1);
  std::vector<std::vector<Matrix>> bad{{Matrix{{1, 2}}}, {Matrix{{1, 2}}}};
  EXPECT_THROW(mps_tensor(bad), StructuralError);
}

TEST(MpsTensor, CyclicShift) {
  std::mt19937_64 rng(205);
  std::vector<int> a{2, 3, 2};
  std::vector<std::vector<Matrix>> M(3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 2; ++i)
      M[std::size_t(j)].push_back(suite::random_matrix(rng, std::size_t(a[std::size_t(j)]), std::size_t(a[std::size_t((j + 1) % 3)])));
  Tensor T = mps_tensor(M);
  std::vector<std::vector<Matrix>> S{M[1], M[2], M[0]};
  Tensor U = mps_tensor(S);
  for (auto &[i, v] : T.entries) EXPECT_EQ(U.at({i[1], i[2], i[0]}), v);
}

TEST(ImpsMap, DisplayedCoordinates) {
  RationalMap f = imps_map(2, 2, 3);
  const RingPtr &X = f.domain;
  ASSERT_EQ(f.coords.size(), 8u);
  EXPECT_EQ(f.coords[0], parse_polynomial("A^3+3*A*B*C+3*B*C*D+D^3", X));
  EXPECT_EQ(f.coords[1], parse_polynomial("A^2*a+A*B*c+a*B*C+B*c*D+A*b*C+B*C*d+b*C*D+D^2*d", X));
  EXPECT_EQ(f.coords[4], parse_polynomial("A*a^2+A*b*c+a*B*c+B*c*d+a*b*C+b*C*d+b*c*D+D*d^2", X));
  EXPECT_EQ(f.coords[7], parse_polynomial("a^3+3*a*b*c+3*b*c*d+d^3", X));
  // At M = L = identity every trace is 2.
  std::vector<Rational> id{1, 0, 0, 1, 1, 0, 0, 1};
  for (auto &c : f.coords) EXPECT_EQ(c.eval(id), 2);
}

TEST(ImpsMap, AgreesWithImpsTensor) {
  RationalMap f = imps_map(2, 3, 3);
  std::mt19937_64 rng(206);
  std::vector<Matrix> M;
  std::vector<Rational> pt;
  for (int i = 0; i < 3; ++i) {
    M.push_back(suite::random_matrix(rng, 2, 2));
    for (auto &row : M.back())
      for (auto &x : row) pt.push_back(x);
  }
  Tensor T = imps_tensor(M, 3);
  auto order = imps_coordinate_order(3, 3);
  for (std::size_t j = 0; j < order.size(); ++j) EXPECT_EQ(f.coords[j].eval(pt), T.at(order[j]));
}

TEST(ImpsMap, RestrictedMap) {
  RationalMap f = imps223_restricted();
  EXPECT_EQ(f.domain->size(), 5u);
  // M = diag(1, 0), L = 0.
  std::vector<Rational> q;
  for (auto &c : f.coords) q.push_back(c.eval({1, 0, 0, 0, 0}));
  EXPECT_EQ(q, (std::vector<Rational>{1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Construction, QEqualsThree) {
  auto r = suite::thm45_check();
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(Construction, QEqualsFive) {
  auto r = suite::thm46_check(5);
  EXPECT_TRUE(r.ok()) << r.summary();
  EXPECT_LE(thm46_construction(5).rank_one_terms.size(), 10u);
}

TEST(Construction, QEqualsSeven) {
  auto r = suite::thm46_check(7);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(Construction, RejectsEvenQ) {
  EXPECT_THROW(thm46_construction(2), PreconditionError);
  EXPECT_THROW(thm46_construction(4), PreconditionError);
  EXPECT_THROW(thm46_construction(1), PreconditionError);
}

TEST(Benchmarks, ListAndCoordinates) {
  auto maps = benchmark_maps();
  ASSERT_EQ(maps.size(), 10u);
  EXPECT_EQ(corpus_map("gradient").coords[0].to_string(), parse_polynomial("2*x*y*z+y^2*z+y*z^2", corpus_map("gradient").domain).to_string());
  RationalMap cfn = corpus_map("cfn");
  EXPECT_EQ(cfn.coords[0], parse_polynomial("a*c*e+b*d*f", cfn.domain));
  EXPECT_EQ(corpus_map("gradient-squared").degree(), 9u);
  EXPECT_EQ(corpus_map("random-sextics").degree(), 6u);
  for (auto *name : {"cubics-through-point", "quadrics-through-point"})
    for (auto &c : corpus_map(name).coords) EXPECT_EQ(c.eval({1, 1, 1}), 0) << name;
  EXPECT_THROW(corpus_map("nope"), PreconditionError);
}

TEST(Benchmarks, RandomFormsAreReproducible) {
  EXPECT_EQ(corpus_map("random-cubics").coords, corpus_map("random-cubics").coords);
}

TEST(Benchmarks, CfnSymmetricDegeneration) {
  RationalMap f = corpus_map("cfn");
  std::mt19937_64 rng(207);
  for (int n = 0; n < 10; ++n) {
    Rational a = oracle::small_rational(rng), c = oracle::small_rational(rng), e = oracle::small_rational(rng);
    std::vector<Rational> p{a, a, c, c, e, e};
    for (auto &coord : f.coords) EXPECT_EQ(coord.eval(p), f.coords[0].eval(p));
  }
}
