#include <gtest/gtest.h>

#include "cl4/checker.hpp"
#include "cl4/prover.hpp"
#include "cl4/syntax.hpp"
#include "support/generators.hpp"

using namespace cl4;

namespace {
Formula P(const char* text) { return parse_formula(text); }

ProverConfig cl3() {
  ProverConfig c;
  c.logic = Logic::CL3;
  return c;
}

void expect_measure_decreases(const ProofNode& n) {
  for (const ProofNode& p : n.premises) {
    EXPECT_LT(measure(p.conclusion), measure(n.conclusion)) << render_formula(n.conclusion);
    expect_measure_decreases(p);
  }
}
}  // namespace

TEST(WaitPremises, Examples) {
  EXPECT_EQ(wait_premises(P("(p cand q) \\/ r")), (std::vector<Formula>{P("p \\/ r"), P("q \\/ r")}));
  EXPECT_EQ(wait_premises(P("call x: p(x)")), (std::vector<Formula>{P("p(w0)")}));
  EXPECT_TRUE(wait_premises(P("p \\/ q")).empty());
}

TEST(WaitPremises, FreshVariableAvoidsOccurringNames) {
  EXPECT_EQ(wait_premises(P("p(w0) \\/ call x: q(x)")), (std::vector<Formula>{P("p(w0) \\/ q(w1)")}));
}

TEST(Moves, Examples) {
  auto m = enumerate_moves(P("p cor q"), {});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(std::get<ChooseDisjunct>(m[0]), (ChooseDisjunct{Path{}, 0}));
  EXPECT_EQ(std::get<ChooseDisjunct>(m[1]), (ChooseDisjunct{Path{}, 1}));

  auto mm = enumerate_moves(P("P(0) \\/ ~P(0)"), {});
  ASSERT_EQ(mm.size(), 1u);
  const auto& match = std::get<MatchPair>(mm[0]);
  EXPECT_EQ(match.pos_path, Path{{0}});
  EXPECT_EQ(match.neg_path, Path{{1}});
  EXPECT_EQ(match.fresh, (LetterId{Sort::Elementary, "p_0", 1}));

  auto mt = enumerate_moves(P("cex x: p(x)"), {});
  ASSERT_EQ(mt.size(), 1u);
  EXPECT_EQ(std::get<ChooseTerm>(mt[0]), (ChooseTerm{Path{}, Term::constant(0)}));
}

TEST(Moves, TermPoolContents) {
  Formula f = P("p(v, 0) \\/ cex x: q(x, 2)");
  EXPECT_EQ(term_pool(f, TermPool::Occurring),
            (std::vector<Term>{Term::constant(0), Term::constant(2), Term::variable("v")}));
  EXPECT_EQ(term_pool(f, TermPool::OccurringPlusFresh),
            (std::vector<Term>{Term::constant(0), Term::constant(1), Term::constant(2), Term::variable("v")}));
  EXPECT_EQ(term_pool(f, TermPool::OccurringPlusTwoFresh).size(), 5u);
}

TEST(Moves, NoMatchInCl3) {
  EXPECT_TRUE(enumerate_moves(P("P(0) \\/ ~P(0)"), cl3()).empty());
}

TEST(ApplyMove, RejectsBadInstances) {
  Formula f = P("P \\/ P \\/ ~P");
  EXPECT_THROW(apply_move(f, MatchPair{Path{{0}}, Path{{1}}, {Sort::Elementary, "p_0", 0}}), RuleError);
  EXPECT_THROW(apply_move(f, MatchPair{Path{{0}}, Path{{2}}, {Sort::Elementary, "p_0", 1}}), RuleError);
  EXPECT_THROW(apply_move(f, ChooseDisjunct{Path{}, 0}), RuleError);
  EXPECT_THROW(apply_move(P("p \\/ (q cor cex x: r(x))"), ChooseTerm{Path{{1, 1}}, Term::constant(0)}), RuleError);
  EXPECT_THROW(apply_move(P("cex x: p(x) \\/ cex y: q(y)"), ChooseTerm{Path{{0}}, Term::variable("y")}), RuleError);
}

TEST(Prove, TopIsAWaitAxiom) {
  auto p = prove(Formula::top());
  ASSERT_TRUE(p);
  EXPECT_TRUE(std::holds_alternative<Wait>(p->rule));
  EXPECT_TRUE(p->premises.empty());
}

TEST(Prove, ExcludedMiddleForGeneralLetter) {
  auto p = prove(P("P \\/ ~P"));
  ASSERT_TRUE(p);
  ASSERT_TRUE(std::holds_alternative<MatchPair>(p->rule));
  ASSERT_EQ(p->premises.size(), 1u);
  EXPECT_EQ(p->premises[0].conclusion, P("p_0 \\/ ~p_0"));
  EXPECT_TRUE(std::holds_alternative<Wait>(p->premises[0].rule));
  EXPECT_FALSE(is_stable(P("P \\/ ~P")));
}

TEST(Prove, UniversalChoiceOfAnUndecidedAtomFails) {
  EXPECT_FALSE(prove(P("call x: (p(x) cor ~p(x))")));
  EXPECT_TRUE(prove(P("cex x: call y: (p(y) \\/ ~p(y))")));
  EXPECT_TRUE(prove(P("call x: cex y: (~p(x) \\/ p(y))")));
  EXPECT_FALSE(prove(P("cex y: call x: (~p(x) \\/ p(y))")));
}

TEST(Prove, ChoiceVersusParallel) {
  EXPECT_TRUE(prove(P("(P cand Q) \\/ (~P cor ~Q)")));
  EXPECT_FALSE(prove(P("(P /\\ P) \\/ ~P")));
  EXPECT_TRUE(prove(P("(p /\\ p) \\/ ~p")));
}

TEST(Prove, Cl3RejectsGeneralLetters) {
  EXPECT_THROW(search(P("P \\/ ~P"), cl3()), FormulaError);
  EXPECT_TRUE(prove(P("p \\/ ~p"), cl3()));
}

TEST(Prove, DepthLimitBelowBound) {
  ProverConfig c;
  c.depth_limit = 1;
  EXPECT_THROW(search(P("P \\/ ~P"), c), DepthLimitExceeded);
  c.depth_limit = measure(P("P \\/ ~P")) + 1;
  EXPECT_TRUE(search(P("P \\/ ~P"), c).proof);
}

TEST(Prove, RandomFormulasSoundDeterministicAndBounded) {
  gen::FormulaGenerator g(31, {.depth = 3});
  int proved = 0;
  for (int i = 0; i < 400; ++i) {
    Formula f = g.next();
    SearchResult r = search(f);
    ASSERT_LE(r.stats.max_depth, measure(f) + 1);
    ProverConfig plain;
    plain.memoization = false;
    plain.forced_match = false;
    SearchResult r2 = search(f, plain);
    ASSERT_EQ(r.proof.has_value(), r2.proof.has_value()) << render_formula(f);
    ProverConfig no_memo;
    no_memo.memoization = false;
    ASSERT_EQ(search(f, no_memo).proof, r.proof) << render_formula(f);
    ASSERT_EQ(search(f).proof, r.proof);
    if (r.proof) {
      ++proved;
      ASSERT_EQ(r.proof->conclusion, f);
      CheckResult c = check_proof(*r.proof);
      ASSERT_TRUE(c.ok) << render_formula(f) << "\n" << c.diagnostics.front();
      ASSERT_LE(proof_height(*r.proof), measure(f) + 1);
      expect_measure_decreases(*r.proof);
    }
  }
  EXPECT_GT(proved, 20);
}

TEST(Prove, WaitAxiomWhenStableWithoutPremises) {
  gen::FormulaGenerator g(32, {.depth = 4, .choice = false});
  for (int i = 0; i < 500; ++i) {
    Formula f = g.next();
    if (!is_stable(f) || !wait_premises(f).empty()) continue;
    auto p = prove(f);
    ASSERT_TRUE(p);
    EXPECT_TRUE(std::holds_alternative<Wait>(p->rule));
  }
}
