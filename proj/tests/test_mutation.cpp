#include <gtest/gtest.h>

#include "roofflop/script.hpp"

using namespace roofflop;

namespace {

const Mutator& mutator() {
  static const SheafCalculus sc(standard_catalog());
  static const Mutator m(sc);
  return m;
}

Script script(const std::string& name) { return load_script(std::filesystem::path(ROOFFLOP_SCRIPTS) / name); }

SOD start(const std::string& name) { return initial_sod(mutator(), script(name)); }

SOD run_step(const SOD& s, const std::string& step) { return mutator().apply(s, parse_step(step)).sod; }

SOD apply_all(SOD s, const std::vector<std::string>& steps) {
  for (const auto& st : steps) s = run_step(s, st);
  return s;
}

SOD single_block(const std::string& space, const AmbientContext& ctx, const std::vector<std::string>& objs) {
  SOD s{space, ctx, "", {}};
  std::vector<Expr> v;
  for (const auto& o : objs) v.push_back(mutator().object(s, o));
  s.blocks.push_back(Block::explicit_block(v));
  return s;
}

}  // namespace

TEST(Steps, ParseAndPrint) {
  for (const char* s : {"serre-rl 2", "exchange 1", "left 0", "right 3", "swap-objects 2 0", "rewrite 5 1 seqfund1", "regroup 1 18 4 4"}) {
    EXPECT_EQ(to_string(parse_step(s)), s);
  }
  EXPECT_THROW(parse_step("twist 1"), ParseError);
  EXPECT_THROW(parse_step("exchange"), ParseError);
  EXPECT_THROW(parse_step("exchange 1 2"), ParseError);
  EXPECT_THROW(parse_step("exchange -1"), ParseError);
  EXPECT_THROW(parse_step("rewrite 1 1"), ParseError);
  EXPECT_THROW(parse_step("regroup 1 2"), ParseError);
  EXPECT_THROW(parse_step("left x"), ParseError);
}

TEST(Steps, SerreTransportRoundTrips) {
  const SOD s = start("g2dagger.mut");
  for (int n = 1; n <= 3; ++n) {
    const SOD there = run_step(s, "serre-rl " + std::to_string(n));
    EXPECT_EQ(run_step(there, "serre-lr " + std::to_string(n)), s) << n;
  }
  // transport twists by the discrepancy
  const SOD t = run_step(s, "serre-rl 1");
  EXPECT_EQ(print_expr(t.blocks.front().objects.front()), "O(1,-1)");
}

TEST(Steps, SerreNeedsATwist) {
  SOD s = start("g2dagger.mut");
  s.ctx = AmbientContext::plain();
  EXPECT_THROW(run_step(s, "serre-rl 1"), StepRejected);
  EXPECT_THROW(run_step(start("g2dagger.mut"), "serre-lr 1"), StepRejected);  // would move the unknown block
}

TEST(Steps, ExchangeIsAnInvolution) {
  const SOD s = apply_all(start("g2dagger.mut"), {"serre-rl 1", "left 0"});
  const SOD once = run_step(s, "exchange 1");
  EXPECT_NE(once, s);
  EXPECT_EQ(run_step(once, "exchange 1"), s);
}

TEST(Steps, ExchangeRecordsBothDirections) {
  const SOD s = apply_all(start("g2dagger.mut"), {"serre-rl 1", "left 0"});
  const StepResult r = mutator().apply(s, parse_step("exchange 1"));
  ASSERT_EQ(r.facts.size(), 2u);
  EXPECT_EQ(r.facts[0].a, r.facts[1].b);
  EXPECT_EQ(r.facts[0].b, r.facts[1].a);
  for (const auto& f : r.facts) EXPECT_TRUE(f.ok);
}

TEST(Steps, LeftAndRightTagTheUnknownBlock) {
  const SOD s = apply_all(start("g2dagger.mut"), {"serre-rl 1", "left 0"});
  const Block& u = s.blocks.at(0);
  ASSERT_TRUE(u.is_unknown());
  EXPECT_EQ(u.pending, std::vector<std::string>{"L<O(1,-1)>"});
  const SOD r = run_step(run_step(s, "exchange 1"), "right 0");
  EXPECT_EQ(r.blocks.at(1).pending.back(), "R<O(-2,0)>");
  EXPECT_THROW(run_step(s, "left 1"), StepRejected);
  EXPECT_THROW(run_step(s, "right 1"), StepRejected);
}

TEST(Steps, EveryStepPreservesTheObjectCount) {
  for (const char* name : {"d4_flop.mut", "g2dagger.mut", "k3_g2.mut"}) {
    const Script sc = script(name);
    SOD s = initial_sod(mutator(), sc);
    const std::size_t n = s.object_count();
    for (const auto& st : sc.steps) {
      s = mutator().apply(s, st).sod;
      ASSERT_EQ(s.object_count(), n) << name << " at " << to_string(st);
    }
  }
}

TEST(Steps, NonOrthogonalSwapIsRejectedWithItsFact) {
  const SOD s = single_block("E_D4", AmbientContext::plain(), {"O", "O"});
  try {
    run_step(s, "swap-objects 0 0");
    FAIL() << "swap of O with O accepted";
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.fact().a, "O(0,0)");
    EXPECT_EQ(e.fact().value, GradedDim::in_degree(0, 1));
    EXPECT_FALSE(e.fact().ok);
  }
}

TEST(Steps, RewriteReplacesTheTargetByTheCone) {
  const SOD s = single_block("E_D4", d4_blowup(), {"O(1,-1)", "U+^v"});
  const StepResult r = mutator().apply(s, parse_step("rewrite 0 0 releuler+"));
  EXPECT_EQ(print_expr(r.sod.blocks[0].objects[0]), "V^v");
  EXPECT_EQ(print_expr(r.sod.blocks[0].objects[1]), "O(1,-1)");
  bool hyp = false;
  for (const auto& f : r.facts) {
    EXPECT_TRUE(f.ok) << f.to_string();
    hyp = hyp || f.kind == "hypothesis";
  }
  EXPECT_TRUE(hyp);
}

TEST(Steps, RewriteRuleMustMatch) {
  const SOD s = single_block("E_D4", d4_blowup(), {"O(1,-1)", "V^v"});
  EXPECT_THROW(run_step(s, "rewrite 0 0 releuler+"), StepRejected);
  EXPECT_THROW(run_step(s, "rewrite 0 0 seqfund1"), StepRejected);  // lives on R
}

TEST(Steps, RegroupSplitsAndMerges) {
  const SOD s = start("g2dagger.mut");
  const SOD g = run_step(s, "regroup 1 3 1 3");
  EXPECT_EQ(g.blocks.size(), s.blocks.size() - 1);
  EXPECT_EQ(g.blocks[2].objects.size(), 3u);
  EXPECT_EQ(run_step(g, "regroup 1 2 1 1 2"), s);
  EXPECT_THROW(run_step(s, "regroup 1 3 2 3"), StepRejected);
  EXPECT_THROW(run_step(s, "regroup 0 2 1 1 2"), StepRejected);  // block 0 is the unknown
  EXPECT_THROW(run_step(s, "regroup 3 1 1"), StepRejected);
}

TEST(Steps, Determinism) {
  const Script sc = script("g2dagger.mut");
  const RunResult a = execute(mutator(), initial_sod(mutator(), sc), sc.steps);
  const SheafCalculus fresh(standard_catalog());
  const Mutator other(fresh);
  const RunResult b = execute(other, initial_sod(other, sc), sc.steps);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.final, b.final);
  EXPECT_EQ(run_json(sc, a), run_json(sc, b));
}

TEST(Sod, InitialSodsAreSemiorthogonal) {
  for (const char* name : {"d4_flop.mut", "d4_flop_minus.mut", "g2dagger.mut", "g2dagger_minus.mut"}) {
    EXPECT_FALSE(mutator().first_violation(start(name)).has_value()) << name;
  }
  const SOD bad = single_block("E_D4", AmbientContext::plain(), {"O(1,0)", "O"});
  const auto v = mutator().first_violation(bad);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->a, "O(0,0)");
}

TEST(Compare, TranspositionNeedsOrthogonality) {
  const SOD a = single_block("R", g2_blowup(), {"O", "EE", "O(1,-1)", "O(-1,1)"});
  const SOD b = single_block("R", g2_blowup(), {"O", "EE", "O(-1,1)", "O(1,-1)"});
  const Comparison c = mutator().compare(a, b);
  EXPECT_TRUE(c.agree) << c.reason;
  EXPECT_FALSE(c.justifications.empty());
  const SOD d = single_block("R", g2_blowup(), {"EE", "O", "O(1,-1)", "O(-1,1)"});
  EXPECT_FALSE(mutator().compare(a, d).agree);
  EXPECT_FALSE(mutator().compare(a, single_block("E_D4", d4_blowup(), {"O"})).agree);
}

TEST(Board, CellsOfThePresets) {
  EXPECT_EQ(mutator().board(start("d4_flop.mut")).size(), 18u);
  EXPECT_EQ(mutator().board(start("g2dagger.mut")).size(), 10u);
  for (const auto& c : mutator().board(start("g2dagger.mut"))) EXPECT_TRUE(c.kind == "O" || c.kind == "OU") << c.kind;
}
