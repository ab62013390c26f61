#ifndef CL4_BRIDGE_HPP
#define CL4_BRIDGE_HPP

// Correspondence between winning strategy trees of a QBF and proofs of its
// reduction image.
//
// Every formula in a canonical proof of reduce_to_cl4(q) is a stack of
// wrappers  q_i(c_i) \/ (~q_i(c_i) /\ . )  around one of the forms
//
//   A  cex x: T
//   B  (G(0) cand G(1)) \/ cex y: (~G(y) /\ T)
//   G  G(c) \/ cex y: (~G(y) /\ T)
//   H  G(c) \/ (~G(c) /\ T)
//
// or around a choiceless leaf. A proof reads, per E choice and A choice:
//
//   A --choose-term--> B --wait--> G, G --choose-term--> H --match--> A ...

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cl4/checker.hpp"
#include "cl4/elementary.hpp"
#include "cl4/error.hpp"
#include "cl4/formula.hpp"
#include "cl4/prover.hpp"
#include "cl4/qbf.hpp"
#include "cl4/reduction.hpp"
#include "cl4/syntax.hpp"

namespace cl4 {

enum class ShapeClass { FormA, FormB, FormG, FormH, LeafElementaryContext, Other };

inline const char* shape_name(ShapeClass s) {
  switch (s) {
    case ShapeClass::FormA: return "A";
    case ShapeClass::FormB: return "B";
    case ShapeClass::FormG: return "G";
    case ShapeClass::FormH: return "H";
    case ShapeClass::LeafElementaryContext: return "leaf";
    case ShapeClass::Other: break;
  }
  return "other";
}

/// Result of peeling the wrappers: the class and where the core sits.
struct ShapeInfo {
  ShapeClass shape = ShapeClass::Other;
  std::size_t wrappers = 0;
  Path core_path;
  Formula core = Formula::top();
};

namespace detail {

inline bool is_bit_constant(const Term& t) { return t.is_constant() && t.value() <= 1; }

inline bool is_unary_atom(const Formula& f, Sort sort, bool negated) {
  return f.is(Kind::Atom) && f.letter().sort == sort && f.letter().arity == 1 && f.negated() == negated;
}

inline bool is_wrapper(const Formula& f, std::set<std::string>& seen) {
  if (!f.is(Kind::ParOr) || f.children().size() != 2) return false;
  const Formula& pos = f.child(0);
  const Formula& rest = f.child(1);
  if (!is_unary_atom(pos, Sort::Elementary, false) || !is_bit_constant(pos.args()[0])) return false;
  if (!rest.is(Kind::ParAnd) || rest.children().size() != 2) return false;
  const Formula& neg = rest.child(0);
  if (!is_unary_atom(neg, Sort::Elementary, true) || neg.letter() != pos.letter() || neg.args() != pos.args())
    return false;
  return seen.insert(pos.letter().name).second;
}

// ~G(y) /\ T under cex y, with G the given letter.
inline bool is_guarded_exists(const Formula& f, const LetterId& g) {
  if (!f.is(Kind::ChoEx)) return false;
  const Formula& b = f.body();
  if (!b.is(Kind::ParAnd) || b.children().size() != 2) return false;
  const Formula& neg = b.child(0);
  return is_unary_atom(neg, Sort::General, true) && neg.letter() == g && neg.args()[0].is_variable() &&
         neg.args()[0].name() == f.var();
}

inline ShapeClass classify_core(const Formula& f) {
  if (f.is(Kind::ChoEx)) return ShapeClass::FormA;
  if (f.is(Kind::ParOr) && f.children().size() == 2) {
    const Formula& left = f.child(0);
    const Formula& right = f.child(1);
    if (left.is(Kind::ChoAnd) && left.children().size() == 2) {
      const Formula& g0 = left.child(0);
      const Formula& g1 = left.child(1);
      if (is_unary_atom(g0, Sort::General, false) && is_unary_atom(g1, Sort::General, false) &&
          g0.letter() == g1.letter() && g0.args()[0] == Term::constant(0) && g1.args()[0] == Term::constant(1) &&
          is_guarded_exists(right, g0.letter()))
        return ShapeClass::FormB;
    }
    if (is_unary_atom(left, Sort::General, false) && is_bit_constant(left.args()[0])) {
      if (is_guarded_exists(right, left.letter())) return ShapeClass::FormG;
      if (right.is(Kind::ParAnd) && right.children().size() == 2) {
        const Formula& neg = right.child(0);
        if (is_unary_atom(neg, Sort::General, true) && neg.letter() == left.letter() && neg.args() == left.args())
          return ShapeClass::FormH;
      }
    }
  }
  if (is_choiceless(f)) return ShapeClass::LeafElementaryContext;
  return ShapeClass::Other;
}

}  // namespace detail

inline ShapeInfo analyze_shape(const Formula& f) {
  ShapeInfo info;
  info.core = f;
  std::set<std::string> seen;
  while (detail::is_wrapper(info.core, seen)) {
    info.core = info.core.child(1).child(1);
    info.core_path = info.core_path.child(1).child(1);
    ++info.wrappers;
  }
  info.shape = detail::classify_core(info.core);
  return info;
}

/// Structural class after peeling wrappers outside-in. Total and exclusive.
inline ShapeClass classify_shape(const Formula& f) { return analyze_shape(f).shape; }

/// Proof-level names 1, 2t, 2m, 2b, 3, ...; once the choiceless region is
/// reached numbering continues without subscripts.
struct LevelLabel {
  enum class Sub { None, T, M, B };
  std::size_t number = 1;
  Sub sub = Sub::None;

  bool operator==(const LevelLabel&) const = default;

  std::string to_string() const {
    static const char* names[] = {"", "_t", "_m", "_b"};
    return std::to_string(number) + names[static_cast<int>(sub)];
  }
};

/// Label of the proof level at `depth` (root = 0) for a prefix of length n.
inline LevelLabel level_label(std::size_t depth, std::size_t n) {
  std::size_t universal = n / 2;
  if (depth > 4 * universal) return {n + depth - 4 * universal, LevelLabel::Sub::None};
  std::size_t r = depth % 4;
  return {1 + 2 * (depth / 4) + (r != 0 ? 1 : 0), static_cast<LevelLabel::Sub>(r)};
}

namespace detail {

/// Builds the canonical proof below a form-A formula from a labelled tree.
class CanonicalBuilder {
 public:
  ProofNode from_a(const Formula& f, const StrategyNode& e) {
    ShapeInfo s = analyze_shape(f);
    if (s.shape != ShapeClass::FormA)
      throw BridgeError("expected form A, got form " + std::string(shape_name(s.shape)) + ": " + render_formula(f));
    ProofNode node{f, ChooseTerm{s.core_path, Term::constant(static_cast<std::uint64_t>(e.label))}, {}};
    Formula next = apply_rule_move(f, node.rule);
    ShapeInfo ns = analyze_shape(next);
    if (ns.shape == ShapeClass::FormB) {
      if (e.children.size() != 2) throw BridgeError("strategy tree is shallower than the prefix");
      node.premises.push_back(from_b(next, ns, e));
    } else if (ns.shape == ShapeClass::LeafElementaryContext) {
      if (!e.children.empty()) throw BridgeError("strategy tree is deeper than the prefix");
      node.premises.push_back(close_leaf(next));
    } else {
      throw BridgeError("unexpected form " + std::string(shape_name(ns.shape)) + ": " + render_formula(next));
    }
    return node;
  }

 private:
  ProofNode from_b(const Formula& f, const ShapeInfo& s, const StrategyNode& e) {
    ProofNode node{f, Wait{}, {}};
    std::vector<Formula> sides = wait_premises(f);
    if (sides.size() != 2) throw BridgeError("form B formula does not split into two sides: " + render_formula(f));
    for (std::uint64_t i = 0; i < 2; ++i) {
      const StrategyNode& a = e.children[i];
      if (a.label != static_cast<int>(i) || a.children.size() != 1)
        throw BridgeError("universal node does not carry label " + std::to_string(i));
      const Formula& g = sides[i];
      ProofNode choose{g, ChooseTerm{s.core_path.child(1), Term::constant(i)}, {}};
      Formula h = apply_rule_move(g, choose.rule);
      LetterId letter = subformula_at(h, s.core_path.child(0))->letter();
      ProofNode match{h, MatchPair{s.core_path.child(0), s.core_path.child(1).child(0), fresh_elementary_letter(h, letter)}, {}};
      Formula a_next = apply_rule_move(h, match.rule);
      match.premises.push_back(from_a(a_next, a.children.front()));
      choose.premises.push_back(std::move(match));
      node.premises.push_back(std::move(choose));
    }
    return node;
  }

  ProofNode close_leaf(const Formula& f) {
    auto letters = surface_general_letters(f);
    if (!letters.empty()) {
      auto moves = match_moves_for(f, letters.front());
      if (moves.size() != 1) throw BridgeError("general letter " + letters.front().name + " is not a single pair");
      ProofNode node{f, moves.front(), {}};
      node.premises.push_back(close_leaf(apply_rule_move(f, node.rule)));
      return node;
    }
    if (!is_stable(f)) throw BridgeError("leaf is not stable: " + render_formula(f));
    return ProofNode{f, Wait{}, {}};
  }
};

/// Reads E's choices off an arbitrary proof of a reduction image: for every
/// segment between two Waits, the term chosen for the segment's existential
/// variable.
class ChoiceExtractor {
 public:
  StrategyNode segment(const ProofNode& start, const std::string& var) {
    std::map<std::string, Term> chosen;
    const ProofNode* cur = &start;
    while (!std::holds_alternative<Wait>(cur->rule)) {
      if (const auto* c = std::get_if<ChooseTerm>(&cur->rule)) {
        auto target = subformula_at(cur->conclusion, c->path);
        if (target && target->is(Kind::ChoEx)) chosen.emplace(target->var(), c->term);
      }
      if (cur->premises.size() != 1) throw BridgeError("move node without a single premise");
      cur = &cur->premises.front();
    }
    auto it = chosen.find(var);
    StrategyNode e{it != chosen.end() && it->second == Term::constant(1) ? 1 : 0, {}};
    if (cur->premises.empty()) return e;

    ShapeInfo s = analyze_shape(cur->conclusion);
    if (s.shape != ShapeClass::FormB)
      throw BridgeError("wait with premises on a form " + std::string(shape_name(s.shape)) +
                        " formula: " + render_formula(cur->conclusion));
    for (std::uint64_t i = 0; i < 2; ++i) {
      const ProofNode* side = nullptr;
      for (const ProofNode& p : cur->premises) {
        auto g = subformula_at(p.conclusion, s.core_path.child(0));
        if (g && g->is_general_atom() && !g->negated() && g->args().size() == 1 && g->args()[0] == Term::constant(i))
          side = &p;
      }
      if (side == nullptr) throw BridgeError("wait lacks the side for " + std::to_string(i));
      // The next existential sits under cex y: (~G(y) /\ cex x: ...).
      const Formula& theta = s.core.child(1).body().child(1);
      if (!theta.is(Kind::ChoEx)) throw BridgeError("universal step not followed by an existential");
      std::string next = theta.var();
      e.children.push_back(StrategyNode{static_cast<int>(i), {segment(*side, next)}});
    }
    return e;
  }
};

}  // namespace detail

/// Builds a proof of reduce_to_cl4(q) that follows the winning tree `t`.
inline ProofNode strategy_to_proof(const Qbf& q, const StrategyTree& t) {
  CheckResult r = check_strategy_tree(q, t);
  if (!r) throw BridgeError("strategy tree rejected: " + r.diagnostics.front());
  return detail::CanonicalBuilder().from_a(reduce_to_cl4(q), t.root);
}

/// Rewrites a proof of a reduction image into the canonical rule order, with
/// the same existential choices (any term other than 1 is read as 0). The
/// conclusion is unchanged and canonical proofs are fixed points.
inline ProofNode canonicalize_proof(const ProofNode& proof) {
  ShapeInfo s = analyze_shape(proof.conclusion);
  if (s.shape != ShapeClass::FormA || s.wrappers != 0)
    throw BridgeError("conclusion is not a reduction image: " + render_formula(proof.conclusion));
  StrategyNode choices = detail::ChoiceExtractor().segment(proof, s.core.var());
  return detail::CanonicalBuilder().from_a(proof.conclusion, choices);
}

namespace detail {

class StrategyReader {
 public:
  explicit StrategyReader(std::size_t n) : n_(n) {}

  StrategyNode from_a(const ProofNode& node, std::size_t depth) {
    expect_shape(node, depth, ShapeClass::FormA);
    ShapeInfo s = analyze_shape(node.conclusion);
    const auto* c = std::get_if<ChooseTerm>(&node.rule);
    if (c == nullptr || c->path != s.core_path || node.premises.size() != 1)
      off_pattern(node, depth, "expected choose-term on the leading existential");
    StrategyNode e{c->term == Term::constant(1) ? 1 : 0, {}};
    const ProofNode& next = node.premises.front();
    ShapeInfo ns = analyze_shape(next.conclusion);
    if (ns.shape == ShapeClass::LeafElementaryContext) {
      leaf(next, depth + 1);
      return e;
    }
    expect_shape(next, depth + 1, ShapeClass::FormB);
    if (!std::holds_alternative<Wait>(next.rule) || next.premises.size() != 2)
      off_pattern(next, depth + 1, "expected wait with two premises");
    for (std::uint64_t i = 0; i < 2; ++i) {
      const ProofNode& g = next.premises[i];
      expect_shape(g, depth + 2, ShapeClass::FormG);
      const auto* gc = std::get_if<ChooseTerm>(&g.rule);
      if (gc == nullptr || gc->path != ns.core_path.child(1) || !(gc->term == Term::constant(i)) ||
          g.premises.size() != 1)
        off_pattern(g, depth + 2, "expected choose-term of " + std::to_string(i) + " on the universal side");
      const ProofNode& h = g.premises.front();
      expect_shape(h, depth + 3, ShapeClass::FormH);
      const auto* m = std::get_if<MatchPair>(&h.rule);
      if (m == nullptr || m->pos_path != ns.core_path.child(0) || m->neg_path != ns.core_path.child(1).child(0) ||
          h.premises.size() != 1)
        off_pattern(h, depth + 3, "expected match on the universal letter");
      e.children.push_back(StrategyNode{static_cast<int>(i), {from_a(h.premises.front(), depth + 4)}});
    }
    return e;
  }

 private:
  void leaf(const ProofNode& node, std::size_t depth) {
    expect_shape(node, depth, ShapeClass::LeafElementaryContext);
    auto letters = surface_general_letters(node.conclusion);
    if (letters.empty()) {
      if (!std::holds_alternative<Wait>(node.rule) || !node.premises.empty())
        off_pattern(node, depth, "expected wait without premises");
      return;
    }
    const auto* m = std::get_if<MatchPair>(&node.rule);
    if (m == nullptr || node.premises.size() != 1 ||
        subformula_at(node.conclusion, m->pos_path)->letter() != letters.front())
      off_pattern(node, depth, "expected match on " + letters.front().name);
    leaf(node.premises.front(), depth + 1);
  }

  void expect_shape(const ProofNode& node, std::size_t depth, ShapeClass want) {
    ShapeClass got = classify_shape(node.conclusion);
    if (got != want)
      off_pattern(node, depth, "expected form " + std::string(shape_name(want)) + ", got form " + shape_name(got));
  }

  [[noreturn]] void off_pattern(const ProofNode& node, std::size_t depth, const std::string& what) {
    throw BridgeError("non-canonical proof at level " + level_label(depth, n_).to_string() + " (" +
                      render_formula(node.conclusion) + "): " + what);
  }

  std::size_t n_;
};

}  // namespace detail

/// Reads a strategy tree off a canonical proof of reduce_to_cl4(q): an E node
/// is labelled 1 exactly when its existential is instantiated with 1.
inline StrategyTree proof_to_strategy(const Qbf& q, const ProofNode& proof) {
  Formula image = reduce_to_cl4(q);
  if (!(proof.conclusion == image))
    throw BridgeError("root mismatch: proof concludes " + render_formula(proof.conclusion) + ", expected " +
                      render_formula(image));
  CheckResult r = check_proof(proof);
  if (!r) throw BridgeError("proof rejected by the checker: " + r.diagnostics.front());
  return StrategyTree{detail::StrategyReader(q.prefix.size()).from_a(proof, 0)};
}

}  // namespace cl4

#endif  // CL4_BRIDGE_HPP
