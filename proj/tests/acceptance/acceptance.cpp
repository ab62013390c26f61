// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cl4/bench.hpp"
#include "cl4/cl4.hpp"
#include "support/generators.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"

using namespace cl4;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

const char* kExample = "exists x forall y exists z : (-x | y | x) & (z | x | -z)";

// Hand transcription of the printed image of the example, with the unmatched
// parenthesis closed and the stray negation in front of (V(z) \/ ~V(0)) removed.
const char* kPrintedImage =
    "cex x: ((P(0) cand P(1)) \\/ cex y: (~P(y) /\\ cex z: (((Q(x) \\/ ~Q(0)) \\/ (R(y) \\/ ~R(1)) \\/ "
    "(S(x) \\/ ~S(1))) /\\ ((T(z) \\/ ~T(1)) \\/ (U(x) \\/ ~U(1)) \\/ (V(z) \\/ ~V(0))))))";

std::vector<Qbf> criterion1_corpus() { return generate_corpus({CorpusSpec::Mode::Exhaustive, 1, 0, 3, 0, 1}); }
std::vector<Qbf> criterion2_corpus() { return generate_corpus({CorpusSpec::Mode::Random, 3, 2, 4, 200, 20240601}); }

// Merges nested connectives of the same kind so that grouping is irrelevant.
Formula flatten(const Formula& f) {
  if (f.children().empty()) return f;
  std::vector<Formula> kids;
  for (const Formula& c : f.children()) {
    Formula fc = flatten(c);
    if (is_connective(f.kind()) && fc.kind() == f.kind())
      kids.insert(kids.end(), fc.children().begin(), fc.children().end());
    else
      kids.push_back(fc);
  }
  return f.with_children(std::move(kids));
}

// Structural equality up to a bijective renaming of letters.
bool same_up_to_letters(const Formula& a, const Formula& b, std::map<std::string, std::string>& fwd,
                        std::map<std::string, std::string>& back) {
  if (a.kind() != b.kind() || a.children().size() != b.children().size()) return false;
  if (is_quantifier(a.kind()) && a.var() != b.var()) return false;
  if (a.is(Kind::Atom)) {
    if (a.negated() != b.negated() || !(a.args() == b.args()) || a.letter().sort != b.letter().sort) return false;
    auto [f, fnew] = fwd.emplace(a.letter().name, b.letter().name);
    auto [r, rnew] = back.emplace(b.letter().name, a.letter().name);
    return f->second == b.letter().name && r->second == a.letter().name;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!same_up_to_letters(a.child(i), b.child(i), fwd, back)) return false;
  return true;
}

struct Verdicts {
  Qbf q;
  BenchEntry entry;
};

std::vector<Verdicts> run_bench(const std::vector<Qbf>& corpus) {
  BenchReport r = bench_run(corpus, 4);
  std::vector<Verdicts> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) out.push_back({corpus[i], r.entries[i]});
  return out;
}

Outcome triple_agreement(const std::vector<Verdicts>& runs) {
  Outcome o;
  for (const Verdicts& v : runs)
    o.require(v.entry.agree() && v.entry.eval == oracle::qbf_value(v.q),
              "disagreement on " + v.entry.qbf);
  o.detail = o.pass ? std::to_string(runs.size()) + " instances agree" : o.detail;
  return o;
}

Outcome criterion3() {
  Outcome o;
  Qbf q = parse_qbf(kExample, QbfFormat::Textual);
  Formula image = reduce_to_cl4(q);
  std::map<std::string, std::string> fwd, back;
  o.require(same_up_to_letters(flatten(image), flatten(parse_formula(kPrintedImage)), fwd, back),
            "image differs from the printed one: " + render_formula(image));
  o.require(eval_qbf(q), "example evaluates to false");
  auto proof = prove(image);
  o.require(proof.has_value(), "image not provable");
  if (!proof) return o;
  o.require(check_proof(*proof).ok, "prover output rejected by the checker");
  StrategyTree t = proof_to_strategy(q, canonicalize_proof(*proof));
  o.require(check_strategy_tree(q, t).ok, "extracted tree is not winning");
  if (o.pass) o.detail = "image matches; extracted tree " + strategy_to_json(t.root).dump();
  return o;
}

Outcome criterion4() {
  Outcome o;
  gen::FormulaGenerator g(20240604, {.depth = 4});
  std::size_t checked = 0, draws = 0;
  while (checked < 1000 && draws < 1000000) {
    ++draws;
    Formula pi = g.next();
    if (!is_stable(pi)) continue;
    ++checked;
    LetterId q = fresh_elementary_letter(pi, LetterId{Sort::General, "Q", 1});
    for (std::uint64_t c : {0, 1}) {
      Formula wrapped = Formula::par_or({Formula::atom(q, {Term::constant(c)}),
                                         Formula::par_and({Formula::atom(q, {Term::constant(c)}, true), pi})});
      o.require(is_stable(wrapped), "wrapper lost stability: " + render_formula(wrapped));
    }
  }
  o.require(checked == 1000, "could not draw 1000 stable formulas");
  if (o.pass) o.detail = "1000 stable formulas, both constants";
  return o;
}

Outcome criterion5(const std::vector<Verdicts>& runs) {
  Outcome o;
  for (const Verdicts& v : runs) {
    auto t = winning_strategy_tree(v.q);
    o.require(t.has_value() == v.entry.eval, "tree existence differs from truth on " + v.entry.qbf);
    if (t) o.require(check_strategy_tree(v.q, *t).ok, "returned tree not winning on " + v.entry.qbf);
  }
  if (o.pass) o.detail = std::to_string(runs.size()) + " instances";
  return o;
}

std::vector<int> odd_level_labels(const StrategyTree& t) {
  std::vector<int> out;
  auto levels = level_labels(t);
  for (std::size_t l = 0; l < levels.size(); l += 2) out.insert(out.end(), levels[l].begin(), levels[l].end());
  return out;
}

Outcome criterion6(const std::vector<Verdicts>& runs) {
  Outcome o;
  std::size_t done = 0;
  for (const Verdicts& v : runs) {
    if (!v.entry.eval) continue;
    StrategyTree t = *winning_strategy_tree(v.q);
    ProofNode p = strategy_to_proof(v.q, t);
    o.require(check_proof(p).ok, "constructed proof rejected for " + v.entry.qbf);
    StrategyTree back = proof_to_strategy(v.q, canonicalize_proof(p));
    o.require(odd_level_labels(back) == odd_level_labels(t), "labels differ after round trip on " + v.entry.qbf);
    ++done;
  }
  o.require(done >= 50, "only " + std::to_string(done) + " true instances");
  if (o.pass) o.detail = std::to_string(done) + " true instances";
  return o;
}

Outcome criterion7(const std::vector<Verdicts>& runs) {
  Outcome o;
  std::vector<ProofNode> proofs;
  for (const Verdicts& v : runs) {
    if (proofs.size() == 50) break;
    if (v.entry.eval && v.q.prefix.size() == 3) proofs.push_back(*prove(reduce_to_cl4(v.q)));
  }
  gen::FormulaGenerator g(20240607, {.depth = 3});
  for (int i = 0; proofs.size() < 100 && i < 100000; ++i)
    if (auto p = prove(g.next()); p && proof_size(*p) >= 2) proofs.push_back(*p);
  o.require(proofs.size() == 100, "could not collect 100 proofs");
  std::size_t mutants = 0;
  for (const ProofNode& p : proofs) {
    o.require(check_proof(p).ok, "unmutated proof rejected");
    for (const auto& m : mutate::all_mutants(p)) {
      ++mutants;
      o.require(!check_proof(m.proof).ok, "accepted mutant (" + m.what + ") of " + render_formula(p.conclusion));
    }
  }
  if (o.pass) o.detail = std::to_string(mutants) + " mutants of 100 proofs rejected";
  return o;
}

Outcome criterion8(const std::vector<Verdicts>& runs) {
  Outcome o;
  std::size_t worst = 0;
  for (const Verdicts& v : runs) {
    o.require(v.entry.depth_ok(), "depth bound exceeded on " + v.entry.qbf);
    worst = std::max(worst, v.entry.max_depth);
  }
  if (o.pass) o.detail = std::to_string(runs.size()) + " instances, deepest search " + std::to_string(worst);
  return o;
}

Outcome criterion9(const std::vector<Qbf>& corpus) {
  Outcome o;
  std::set<std::string> seen;
  std::size_t compared = 0;
  ElementarizationHook hook = [&](const Formula& e) {
    if (oracle::atom_key_count(e) > 12 || !seen.insert(render_formula(e)).second) return;
    ++compared;
    o.require(is_valid_classical(e) == oracle::truth_table_valid(e), "validity mismatch on " + render_formula(e));
  };
  for (const Qbf& q : corpus) {
    ProverConfig c4;
    search(reduce_to_cl4(q), c4, hook);
    ProverConfig c3;
    c3.logic = Logic::CL3;
    search(reduce_to_cl3(q), c3, hook);
  }
  if (o.pass) o.detail = std::to_string(compared) + " distinct elementarizations";
  return o;
}

Outcome criterion10(const std::vector<Qbf>& corpus) {
  Outcome o;
  for (const Qbf& q : corpus)
    for (Logic logic : {Logic::CL4, Logic::CL3}) {
      Formula f = logic == Logic::CL4 ? reduce_to_cl4(q) : reduce_to_cl3(q);
      ProverConfig base;
      base.logic = logic;
      ProverConfig larger = base;
      larger.term_pool = TermPool::OccurringPlusTwoFresh;
      o.require(search(f, base).proof.has_value() == search(f, larger).proof.has_value(),
                "verdict changes with the larger pool on " + render_qbf(q));
    }
  if (o.pass) o.detail = std::to_string(corpus.size()) + " instances, both logics";
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::vector<Qbf> c1 = criterion1_corpus(), c2 = criterion2_corpus();
  std::vector<Verdicts> r1, r2, both;
  Qbf example = parse_qbf(kExample, QbfFormat::Textual);

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 triple agreement, exhaustive single-variable corpus", [&] { r1 = run_bench(c1); return triple_agreement(r1); }},
      {"2 triple agreement, 200 random three-variable instances", [&] { r2 = run_bench(c2); return triple_agreement(r2); }},
      {"3 worked example", criterion3},
      {"4 wrapper preserves stability", criterion4},
      {"5 strategy tree exists iff true", [&] {
         both = r1;
         both.insert(both.end(), r2.begin(), r2.end());
         return criterion5(both);
       }},
      {"6 strategy/proof round trip", [&] { return criterion6(both); }},
      {"7 checker rejects every mutation", [&] { return criterion7(both); }},
      {"8 search depth within mu+1", [&] {
         std::vector<Verdicts> all = both;
         all.push_back({example, bench_instance(example, all.size())});
         return criterion8(all);
       }},
      {"9 classical validity against truth tables", [&] {
         std::vector<Qbf> all = c1;
         all.insert(all.end(), c2.begin(), c2.end());
         all.push_back(example);
         return criterion9(all);
       }},
      {"10 term pool robustness", [&] { return criterion10(c1); }},
  };

  bool all = true;
  for (auto& [name, run] : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << name << " (" << o.detail << ", " << secs << " s)";
    std::cout << line.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
