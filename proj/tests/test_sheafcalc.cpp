#include <gtest/gtest.h>

#include "roofflop/sheafcalc.hpp"

using namespace roofflop;

namespace {

const SheafCalculus& calc() {
  static const SheafCalculus sc(standard_catalog());
  return sc;
}

GradedDim rhom(const std::string& space, const std::string& a, const std::string& b, const AmbientContext& ctx = AmbientContext::plain()) {
  return calc().rhom(space, a, b, ctx);
}

std::string line(int a, int b) { return "O(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

/// Euler pairing summed over the irreducible layers, ignoring every connecting map.
long long layered_euler(const std::string& space, const std::string& a, const std::string& b) {
  const SpaceEntry& s = standard_catalog().space(space);
  const auto la = calc().expand({space, calc().parse(space, a), 0});
  const auto lb = calc().expand({space, calc().parse(space, b), 0});
  const auto chi_host = [&](const Weight& twist) {
    long long chi = 0;
    for (const auto& x : la) {
      for (const auto& y : lb) {
        const IrrBundle yb(s.homogeneous, y.bundle.levi_weight + twist);
        const int sign = (y.shift - x.shift) % 2 == 0 ? 1 : -1;
        chi += sign * rhom_irr(x.bundle, yb).euler();
      }
    }
    return chi;
  };
  const Weight zero = Weight::zero(s.homogeneous->root_system().rank());
  if (s.kind == SpaceEntry::Kind::Homogeneous) return chi_host(zero);
  std::vector<int> neg = s.divisor_class;
  for (auto& x : neg) x = -x;
  return chi_host(zero) - chi_host(s.homogeneous->line(neg));
}

}  // namespace

TEST(LemmaVan, AllItemsExactWithStatedValues) {
  const LemmaReport r = verify_lemma_van(calc());
  ASSERT_EQ(r.items.size(), 6u);
  EXPECT_TRUE(r.pass());
  for (std::size_t i = 0; i < 4; ++i) {
    for (const auto& [what, g] : r.items[i].values) EXPECT_TRUE(g.is_exact() && g.is_zero()) << what;
  }
  EXPECT_EQ(r.items[4].values.at(0).second, GradedDim::in_degree(0, 1));
  EXPECT_EQ(r.items[5].values.at(0).second, GradedDim::in_degree(0, 1));
  EXPECT_NE(r.items[5].statement.find("V^v"), std::string::npos);
}

TEST(LemmaVan2, BothItemsExact) {
  const LemmaReport r = verify_lemma_van2(calc());
  ASSERT_EQ(r.items.size(), 2u);
  EXPECT_TRUE(r.pass());
  for (const auto& [what, g] : r.items[0].values) EXPECT_TRUE(g.is_exact() && g.is_zero()) << what;
  EXPECT_EQ(r.items[1].values.at(0).second, GradedDim::in_degree(0, 1));
}

TEST(LemmaVan, ItemFiveFailsOffTheStatedTwist) {
  // the lemma is sharp: one twist over, the point disappears
  EXPECT_FALSE(rhom("E_D4", "O(0,0)", "U+^v(-1,2)", d4_blowup()).is_point());
}

TEST(Sequences, RankAndDeterminantAreAdditive) {
  for (const auto& [name, rule] : standard_catalog().sequences) {
    const SequenceCheck c = check_sequence(calc(), rule);
    EXPECT_TRUE(c.rank_ok) << name << ": " << c.rank_left << " + " << c.rank_right << " vs " << c.rank_middle;
    EXPECT_TRUE(c.det_ok) << name;
  }
}

TEST(Sequences, KnownRanks) {
  const auto& cat = standard_catalog();
  const SequenceCheck e = check_sequence(calc(), cat.sequence("releuler+"));
  EXPECT_EQ(e.rank_left, 1);
  EXPECT_EQ(e.rank_middle, 4);
  EXPECT_EQ(e.rank_right, 3);
  const SequenceCheck o = check_sequence(calc(), cat.sequence("Ott"));
  EXPECT_EQ(o.rank_right, 3);
  const SequenceCheck f = check_sequence(calc(), cat.sequence("seqfund1"));
  EXPECT_EQ(f.rank_middle, 4);
  EXPECT_EQ(f.rank_right, 3);
}

TEST(RouteOracle, DirectBwbEqualsTheFibrationRoute) {
  for (int a = -6; a <= 6; ++a) {
    for (int b = -6; b <= 6; ++b) {
      EXPECT_EQ(calc().line_cohomology_via_pminus(a, b), rhom("E_D4", "O", line(a, b))) << line(a, b);
    }
  }
}

TEST(RouteOracle, PairsOfLineBundles) {
  // RHom(O(a,b), O(c,d)) depends only on the difference
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      EXPECT_EQ(rhom("E_D4", line(a, b), line(a + 1, b - 2)), calc().line_cohomology_via_pminus(1, -2));
    }
  }
}

TEST(Pullback, ProjectionFormulaIsExact) {
  EXPECT_EQ(rhom("E_D4", "U+^v", "O(2,-1)"), GradedDim{});
  EXPECT_EQ(rhom("E_D4", "U+^v", "U+^v"), GradedDim::in_degree(0, 1));
  EXPECT_EQ(rhom("E_D4", "U-^v", "U-^v"), GradedDim::in_degree(0, 1));
  EXPECT_EQ(rhom("R", "S", "S"), GradedDim::in_degree(0, 1));
  // G' restricts to the Ottaviani bundle of the hyperplane section, like G
  EXPECT_EQ(rhom("R", "G'", "G'"), GradedDim::exact({{0, 1}, {1, 7}}));
}

TEST(Pullback, EulerCharacteristicAgreesWithTheLayers) {
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      for (const char* x : {"U+^v", "U-", "V"}) {
        const GradedDim g = rhom("E_D4", x, line(a, b));
        ASSERT_TRUE(g.is_exact()) << x << " " << line(a, b);
        EXPECT_EQ(g.euler(), layered_euler("E_D4", x, line(a, b))) << x << " " << line(a, b);
      }
    }
  }
}

TEST(Nonsplit, TrianglesOnTheDivisorAreExceptional) {
  for (const char* x : {"EE", "S'", "S", "O(1,-1)", "O(-1,1)"}) EXPECT_EQ(rhom("R", x, x), GradedDim::in_degree(0, 1)) << x;
  EXPECT_EQ(layered_euler("R", "EE", "EE"), 1);
}

TEST(Nonsplit, SerreCrossCheckClosesTheInterval) {
  EXPECT_EQ(rhom("R", "S'(1,1)", "O(0,-2)"), GradedDim{});
  EXPECT_EQ(rhom("R", "S'(1,1)", "O(0,-2)", g2_blowup()), GradedDim{});
}

TEST(Nonsplit, OttavianiIsNotExceptional) {
  // chi(G, G) = -6: the interval must not claim C[0]
  const GradedDim g = rhom("Q5", "G", "G");
  EXPECT_FALSE(g.is_point());
  EXPECT_EQ(layered_euler("Q5", "G", "G"), -6);
  EXPECT_LE(g.lower_at(1), 7);
  EXPECT_GE(g.upper_at(1), 6);
}

TEST(Ambient, BlowupAddsTheConormalTerm) {
  // End in the blowup: RHom_E(O,O) plus RHom_E(O(1,1), O)[-1]
  EXPECT_EQ(rhom("E_D4", "O", "O", d4_blowup()), GradedDim::in_degree(0, 1));
  EXPECT_EQ(rhom("E_D4", "O(1,-1)", "O", d4_blowup()), GradedDim{});
  EXPECT_EQ(rhom("E_D4", "O(1,-1)", "U+^v", d4_blowup()), GradedDim::in_degree(0, 1));
  EXPECT_EQ(rhom("R", "O(1,-1)", "S", g2_blowup()), GradedDim::in_degree(0, 1));
}

TEST(Ambient, SerreDataPerMode) {
  EXPECT_EQ(calc().serre_data("E_D4", AmbientContext::plain()), (std::pair<std::vector<int>, int>{{-4, -4}, 9}));
  EXPECT_EQ(calc().serre_data("E_D4", d4_blowup()), (std::pair<std::vector<int>, int>{{-3, -3}, 10}));
  EXPECT_EQ(calc().serre_data("E_D4", AmbientContext::hyperplane({1, 1}, 3, 8)), (std::pair<std::vector<int>, int>{{-3, -3}, 8}));
  EXPECT_EQ(calc().serre_data("R", g2_blowup()), (std::pair<std::vector<int>, int>{{-2, -2}, 8}));
}

TEST(Ambient, ContextMustMatchThePicardRank) {
  EXPECT_THROW(rhom("E_D4", "O", "O", AmbientContext::blowup({1}, 3, 10)), CatalogError);
  EXPECT_THROW(rhom("E_D4", "O", "O(1)"), CatalogError);
}

TEST(Divisor, KoszulRestriction) {
  EXPECT_EQ(rhom("R", "O", "O"), GradedDim::in_degree(0, 1));
  EXPECT_EQ(rhom("FlagB3", "O", "O(1,1)"), GradedDim::in_degree(0, 48));
  EXPECT_EQ(rhom("FlagB3", "O", "O(1,0)"), GradedDim::in_degree(0, 7));
  // the restriction map on sections is not computed: the answer is an interval around 41 sections
  const GradedDim g = rhom("R", "O", "O(1,1)");
  EXPECT_FALSE(g.is_exact());
  EXPECT_LE(g.lower_at(0), 41);
  EXPECT_GE(g.upper_at(0), 41);
  EXPECT_EQ(g.lower_at(-1), 0);
}

TEST(Expand, RankAndDeterminant) {
  const auto obj = [](const std::string& s, const std::string& e) { return SheafObject{s, calc().parse(s, e), 0}; };
  EXPECT_EQ(calc().rank(obj("E_D4", "U+^v")), 4);
  EXPECT_EQ(calc().rank(obj("R", "EE")), 3);
  EXPECT_EQ(calc().rank(obj("R", "S'")), 4);
  EXPECT_EQ(calc().rank(obj("Q5", "G^v")), 3);
  EXPECT_EQ(calc().det(obj("E_D4", "O(2,-1)")), (std::vector<int>{2, -1}));
  EXPECT_EQ(calc().rank(obj("E_D4", "O[1]")), -1);
}
