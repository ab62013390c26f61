#include <gtest/gtest.h>

#include "cl4/checker.hpp"
#include "cl4/proof_io.hpp"
#include "cl4/prover.hpp"
#include "cl4/syntax.hpp"
#include "support/generators.hpp"
#include "support/mutations.hpp"

using namespace cl4;

namespace {
Formula P(const char* text) { return parse_formula(text); }

bool mentions(const CheckResult& r, const std::string& what) {
  for (const std::string& d : r.diagnostics)
    if (d.find(what) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST(Checker, AcceptsProverOutput) {
  auto p = prove(P("P \\/ ~P"));
  ASSERT_TRUE(p);
  EXPECT_TRUE(check_proof(*p).ok);
}

TEST(Checker, UnstableWait) {
  ProofNode n{P("P \\/ ~P"), Wait{}, {}};
  CheckResult r = check_proof(n);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(mentions(r, "conclusion not stable"));
}

TEST(Checker, MatchOfTwoPositiveOccurrences) {
  Formula f = P("P \\/ P \\/ ~P");
  LetterId fresh{Sort::Elementary, "p_0", 0};
  ProofNode n{f, MatchPair{Path{{0}}, Path{{1}}, fresh}, {ProofNode{P("p_0 \\/ p_0 \\/ ~P"), Wait{}, {}}}};
  CheckResult r = check_proof(n);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(mentions(r, "polarity pair violated"));
}

TEST(Checker, WaitPremiseSets) {
  Formula f = P("(p cand q) \\/ ~p \\/ ~q");
  ProofNode good{f, Wait{}, {{P("p \\/ ~p \\/ ~q"), Wait{}, {}}, {P("q \\/ ~p \\/ ~q"), Wait{}, {}}}};
  EXPECT_TRUE(check_proof(good).ok);

  ProofNode swapped{f, Wait{}, {good.premises[1], good.premises[0]}};
  EXPECT_TRUE(check_proof(swapped).ok);  // premise order is irrelevant

  ProofNode missing{f, Wait{}, {good.premises[0]}};
  EXPECT_TRUE(mentions(check_proof(missing), "missing wait premise"));

  ProofNode extra = good;
  extra.premises.push_back({P("T"), Wait{}, {}});
  EXPECT_TRUE(mentions(check_proof(extra), "unexpected wait premise"));

  ProofNode dup = good;
  dup.premises.push_back(good.premises[0]);
  EXPECT_TRUE(mentions(check_proof(dup), "duplicate wait premise"));
}

TEST(Checker, UniversalPremiseMayUseAnyFreshVariable) {
  Formula f = P("call x: (p(x) \\/ ~p(x))");
  EXPECT_TRUE(check_proof({f, Wait{}, {{P("p(w7) \\/ ~p(w7)"), Wait{}, {}}}}).ok);
  EXPECT_FALSE(check_proof({f, Wait{}, {{P("p(0) \\/ ~p(0)"), Wait{}, {}}}}).ok);
}

TEST(Checker, Cl3RejectsMatch) {
  auto p = prove(P("P \\/ ~P"));
  ProverConfig cfg;
  cfg.logic = Logic::CL3;
  CheckResult r = check_proof(*p, cfg);
  EXPECT_FALSE(r.ok);
}

TEST(Checker, DiagnosticsNameTheNode) {
  auto p = prove(P("(P cand Q) \\/ (~P cor ~Q)"));
  ASSERT_TRUE(p);
  ProofNode bad = *p;
  bad.premises[1].premises.clear();
  CheckResult r = check_proof(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(mentions(r, "node root/1:"));
}

TEST(Checker, RejectsEveryMutationOfRandomProofs) {
  gen::FormulaGenerator g(41, {.depth = 3});
  int proofs = 0;
  for (int i = 0; proofs < 60 && i < 5000; ++i) {
    auto p = prove(g.next());
    if (!p || proof_size(*p) < 2) continue;
    ++proofs;
    for (const auto& m : mutate::all_mutants(*p))
      ASSERT_FALSE(check_proof(m.proof).ok) << m.what << " in proof of " << render_formula(p->conclusion);
  }
  EXPECT_EQ(proofs, 60);
}

TEST(ProofIo, RoundTripAndKeyOrder) {
  auto p = prove(P("(P cand Q) \\/ cex x: ((~P /\\ ~Q) \\/ (p(x) \\/ ~p(x)))"));
  ASSERT_TRUE(p);
  std::string text = write_proof(*p);
  EXPECT_EQ(read_proof(text), *p);
  EXPECT_EQ(write_proof(read_proof(text)), text);
  EXPECT_EQ(text.find("\"formula\""), 4u);
  EXPECT_LT(text.find("\"rule\""), text.find("\"premises\""));
}

TEST(ProofIo, RandomProofsRevalidateAfterSerialization) {
  gen::FormulaGenerator g(42, {.depth = 3});
  for (int i = 0; i < 300; ++i) {
    auto p = prove(g.next());
    if (!p) continue;
    ProofNode back = read_proof(write_proof(*p));
    ASSERT_EQ(back, *p);
    ASSERT_TRUE(check_proof(back).ok);
  }
}

TEST(ProofIo, MalformedInput) {
  EXPECT_THROW(read_proof("{"), ParseError);
  EXPECT_THROW(read_proof(R"({"formula": "T", "rule": "jump", "premises": []})"), ParseError);
  EXPECT_THROW(read_proof(R"({"formula": "T", "premises": []})"), ParseError);
  EXPECT_THROW(read_proof(R"({"formula": "(", "rule": "wait", "premises": []})"), ParseError);
}
