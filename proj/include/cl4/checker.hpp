#ifndef CL4_CHECKER_HPP
#define CL4_CHECKER_HPP

// Proof checker: re-derives every premise from the rule definitions.

#include <algorithm>
#include <string>
#include <vector>

#include "cl4/diagnostics.hpp"
#include "cl4/elementary.hpp"
#include "cl4/formula.hpp"
#include "cl4/prover.hpp"
#include "cl4/syntax.hpp"

namespace cl4 {

namespace detail {

/// Whether `premise` is the Wait premise for the ⊓x occurrence at `path`, for
/// some variable not occurring in `conclusion`.
inline bool is_universal_instance(const Formula& conclusion, const Path& path, const Formula& quantified,
                                  const Formula& premise) {
  auto sub = subformula_at(premise, path);
  if (!sub) return false;
  // Locate the instantiating term by walking the body and the candidate side by side.
  std::optional<Term> witness;
  auto find = [&](const Formula& b, const Formula& s, const auto& self) -> void {
    if (witness || b.kind() != s.kind() || b.children().size() != s.children().size()) return;
    if (b.is(Kind::Atom)) {
      if (b.args().size() != s.args().size()) return;
      for (std::size_t i = 0; i < b.args().size(); ++i)
        if (b.args()[i].is_variable() && b.args()[i].name() == quantified.var()) {
          witness = s.args()[i];
          return;
        }
      return;
    }
    for (std::size_t i = 0; i < b.children().size(); ++i) self(b.child(i), s.child(i), self);
  };
  find(quantified.body(), *sub, find);
  if (!witness) return replace_at(conclusion, path, quantified.body()) == premise;
  if (!witness->is_variable() || all_variables(conclusion).contains(witness->name())) return false;
  return replace_at(conclusion, path, substitute_var(quantified.body(), quantified.var(), *witness)) == premise;
}

class ProofChecker {
 public:
  explicit ProofChecker(const ProverConfig& cfg) : cfg_(cfg) {}

  void check(const ProofNode& node, const std::string& where) {
    const Formula& f = node.conclusion;
    if (auto why = well_formedness_violation(f)) fail(where, "ill-formed conclusion: " + *why);
    if (cfg_.logic == Logic::CL3 && has_general_letters(f)) fail(where, "general letter in a CL3 formula");

    if (std::holds_alternative<Wait>(node.rule)) {
      try {
        check_wait(node, where);
      } catch (const Error& e) {
        fail(where, e.what());
      }
    } else {
      if (cfg_.logic == Logic::CL3 && std::holds_alternative<MatchPair>(node.rule))
        fail(where, "match is not a CL3 rule");
      if (node.premises.size() != 1) {
        fail(where, rule_name(node.rule) + " requires exactly one premise");
      } else {
        try {
          Formula expected = apply_rule_move(f, node.rule);
          if (!(expected == node.premises.front().conclusion))
            fail(where, "premise does not match the " + rule_name(node.rule) + " application");
        } catch (const Error& e) {
          fail(where, e.what());
        }
      }
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i)
      check(node.premises[i], where + "/" + std::to_string(i));
  }

  CheckResult result;

 private:
  void fail(const std::string& where, const std::string& what) {
    result.fail("node " + where + ": " + what);
  }

  void check_wait(const ProofNode& node, const std::string& where) {
    const Formula& f = node.conclusion;
    if (!is_stable(f)) fail(where, "conclusion not stable");

    auto occs = surface_occurrences_if(f, [](const Formula& g) { return g.is(Kind::ChoAnd) || g.is(Kind::ChoAll); });
    std::vector<Formula> exact;  // premises forced by ⊓ occurrences
    for (const Occurrence& o : occs)
      if (o.formula.is(Kind::ChoAnd))
        for (const Formula& operand : o.formula.children()) {
          Formula p = replace_at(f, o.path, operand);
          if (std::find(exact.begin(), exact.end(), p) == exact.end()) exact.push_back(p);
        }

    std::vector<bool> covered(node.premises.size(), false);
    for (std::size_t i = 0; i < node.premises.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (node.premises[i].conclusion == node.premises[j].conclusion) fail(where, "duplicate wait premise");

    for (const Formula& p : exact) {
      auto it = std::find_if(node.premises.begin(), node.premises.end(),
                             [&](const ProofNode& n) { return n.conclusion == p; });
      if (it == node.premises.end()) fail(where, "missing wait premise " + render_formula(p));
      else covered[static_cast<std::size_t>(it - node.premises.begin())] = true;
    }
    for (const Occurrence& o : occs) {
      if (!o.formula.is(Kind::ChoAll)) continue;
      bool found = false;
      for (std::size_t i = 0; i < node.premises.size(); ++i)
        if (is_universal_instance(f, o.path, o.formula, node.premises[i].conclusion)) {
          covered[i] = true;
          found = true;
        }
      if (!found) fail(where, "missing wait premise for " + render_formula(o.formula));
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i)
      if (!covered[i]) fail(where, "unexpected wait premise " + render_formula(node.premises[i].conclusion));
  }

  const ProverConfig& cfg_;
};

}  // namespace detail

/// Verifies every node of a derivation against the rule definitions. Node
/// addresses in diagnostics are premise indices from the root ("root/0/1").
inline CheckResult check_proof(const ProofNode& root, const ProverConfig& cfg = {}) {
  detail::ProofChecker checker(cfg);
  checker.check(root, "root");
  return checker.result;
}

}  // namespace cl4

#endif  // CL4_CHECKER_HPP
