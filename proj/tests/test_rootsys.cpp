#include <gtest/gtest.h>

#include <random>

#include "roofflop/rootsys.hpp"

using namespace roofflop;

namespace {

const RootSystem& d4() {
  static const RootSystem rs = build_root_system(CartanType::D, 4);
  return rs;
}
const RootSystem& b3() {
  static const RootSystem rs = build_root_system(CartanType::B, 3);
  return rs;
}
const RootSystem& g2() {
  static const RootSystem rs = build_root_system(CartanType::G2, 2);
  return rs;
}

long long total(const std::map<Weight, int>& m) {
  long long s = 0;
  for (const auto& [w, k] : m) s += k;
  return s;
}

}  // namespace

TEST(RootSystem, PositiveRootCounts) {
  EXPECT_EQ(build_root_system(CartanType::A, 2).positive_roots().size(), 3u);
  EXPECT_EQ(b3().positive_roots().size(), 9u);
  EXPECT_EQ(d4().positive_roots().size(), 12u);
  EXPECT_EQ(g2().positive_roots().size(), 6u);
}

TEST(RootSystem, CartanMatrixConventions) {
  // B3: node 3 short; G2: node 1 short
  EXPECT_EQ(b3().cartan_matrix()[1][2], -2);
  EXPECT_EQ(b3().cartan_matrix()[2][1], -1);
  EXPECT_EQ(g2().cartan_matrix()[0][1], -1);
  EXPECT_EQ(g2().cartan_matrix()[1][0], -3);
  // D4: node 2 is the trivalent node
  for (int j : {0, 2, 3}) EXPECT_EQ(d4().cartan_matrix()[1][static_cast<std::size_t>(j)], -1);
}

TEST(RootSystem, RhoPairsToOneWithEverySimpleCoroot) {
  for (const RootSystem* rs : {&d4(), &b3(), &g2()}) {
    for (int n : rs->all_nodes()) EXPECT_EQ(rs->rho()[static_cast<std::size_t>(n - 1)], 1);
  }
}

TEST(Weyl, DimensionsOfFundamentalRepresentations) {
  EXPECT_EQ(weyl_dim(d4(), Weight({1, 0, 0, 0})), 8);
  EXPECT_EQ(weyl_dim(d4(), Weight({0, 0, 1, 0})), 8);
  EXPECT_EQ(weyl_dim(d4(), Weight({0, 0, 0, 1})), 8);
  EXPECT_EQ(weyl_dim(d4(), Weight({0, 1, 0, 0})), 28);
  EXPECT_EQ(weyl_dim(d4(), Weight({0, 0, 1, 1})), 56);
  EXPECT_EQ(weyl_dim(b3(), Weight({1, 0, 0})), 7);
  EXPECT_EQ(weyl_dim(b3(), Weight({0, 1, 0})), 21);
  EXPECT_EQ(weyl_dim(b3(), Weight({0, 0, 1})), 8);
  EXPECT_EQ(weyl_dim(g2(), Weight({1, 0})), 7);
  EXPECT_EQ(weyl_dim(g2(), Weight({0, 1})), 14);
}

TEST(Weyl, OrbitOfRegularWeightHasGroupOrder) {
  EXPECT_EQ(weyl_orbit(d4(), d4().rho(), d4().all_nodes()).size(), 192u);
  EXPECT_EQ(weyl_orbit(b3(), b3().rho(), b3().all_nodes()).size(), 48u);
  EXPECT_EQ(weyl_orbit(g2(), g2().rho(), g2().all_nodes()).size(), 12u);
}

TEST(Weyl, ReflectionIsAnInvolutionAndAnIsometry) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const Weight w({c(rng), c(rng), c(rng), c(rng)});
    for (int n : d4().all_nodes()) {
      const Weight r = reflect(d4(), w, n);
      EXPECT_EQ(reflect(d4(), r, n), w);
      EXPECT_EQ(d4().inner(r, r), d4().inner(w, w));
    }
  }
}

TEST(Weyl, DominantConjugateIsDominantAndInTheOrbit) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const Weight w({c(rng), c(rng), c(rng)});
    const auto dc = dominant_conjugate(b3(), w);
    EXPECT_TRUE(is_dominant(b3(), dc.dominant));
    EXPECT_TRUE(weyl_orbit(b3(), w, b3().all_nodes()).count(dc.dominant));
  }
}

TEST(Weyl, SingularWeightsAreDetected) {
  // rho - alpha_1 lies on the wall of s_1
  const Weight w = d4().rho() - d4().simple_root(1);
  EXPECT_FALSE(dominant_conjugate(d4(), w).singular);
  EXPECT_TRUE(dominant_conjugate(d4(), Weight({0, 1, 1, 1})).singular);
  EXPECT_TRUE(dominant_conjugate(g2(), Weight({1, -1})).singular);
}

TEST(Freudenthal, TotalMultiplicityEqualsWeylDimension) {
  for (const RootSystem* rs : {&d4(), &b3(), &g2()}) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> c(0, 2);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<int> v(static_cast<std::size_t>(rs->rank()));
      for (auto& x : v) x = c(rng);
      const Weight w(v);
      EXPECT_EQ(total(freudenthal_multiplicities(*rs, w)), weyl_dim(*rs, w)) << to_string(w) << " on " << rs->name();
    }
  }
}

TEST(Freudenthal, ZeroWeightOfAdjoint) {
  EXPECT_EQ(freudenthal_multiplicities(d4(), Weight({0, 1, 0, 0})).at(Weight({0, 0, 0, 0})), 4);
  EXPECT_EQ(freudenthal_multiplicities(g2(), Weight({0, 1})).at(Weight({0, 0})), 2);
}

TEST(Tensor, VectorSquaredInD4) {
  const auto t = tensor_decompose(d4(), Weight({1, 0, 0, 0}), Weight({1, 0, 0, 0}));
  const std::map<Weight, int> want{{Weight({0, 0, 0, 0}), 1}, {Weight({0, 1, 0, 0}), 1}, {Weight({2, 0, 0, 0}), 1}};
  EXPECT_EQ(t, want);
}

TEST(Tensor, DimensionsMultiply) {
  const std::vector<std::pair<Weight, Weight>> cases{{Weight({0, 0, 1, 0}), Weight({0, 0, 0, 1})},
                                                     {Weight({1, 0, 0, 1}), Weight({0, 1, 0, 0})},
                                                     {Weight({0, 0, 2, 0}), Weight({1, 0, 0, 0})}};
  for (const auto& [a, b] : cases) {
    long long sum = 0;
    for (const auto& [w, m] : tensor_decompose(d4(), a, b)) sum += m * weyl_dim(d4(), w);
    EXPECT_EQ(sum, weyl_dim(d4(), a) * weyl_dim(d4(), b));
  }
}

TEST(Tensor, LeviTensorOnSubsetOfNodes) {
  // Levi A1 x A1 x A1 at nodes {1,3,4}: the factor at node 1 splits as V2 + V0, the rest rides along
  const NodeSet levi{1, 3, 4};
  const auto t = tensor_decompose(d4(), Weight({1, 0, 1, 0}), Weight({1, 0, 0, 0}), levi);
  const std::map<Weight, int> want{{Weight({2, 0, 1, 0}), 1}, {Weight({0, 1, 1, 0}), 1}};
  EXPECT_EQ(t, want);
}

TEST(Duality, DualHighestWeight) {
  EXPECT_EQ(dual_highest_weight(d4(), Weight({1, 0, 0, 0}), d4().all_nodes()), Weight({1, 0, 0, 0}));
  const RootSystem a2 = build_root_system(CartanType::A, 2);
  EXPECT_EQ(dual_highest_weight(a2, Weight({1, 0}), a2.all_nodes()), Weight({0, 1}));
}

TEST(Epsilon, RoundTrip) {
  for (const RootSystem* rs : {&d4(), &b3()}) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> v(static_cast<std::size_t>(rs->rank()));
      for (auto& x : v) x = c(rng);
      EXPECT_EQ(from_epsilon(*rs, to_epsilon(*rs, Weight(v))), Weight(v));
    }
  }
}

TEST(Errors, BadRankThrows) {
  EXPECT_THROW(build_root_system(CartanType::D, 2), RootSystemError);
  EXPECT_THROW(build_root_system(CartanType::G2, 3), RootSystemError);
}
