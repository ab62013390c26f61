#ifndef CL4_PROVER_HPP
#define CL4_PROVER_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cl4/elementary.hpp"
#include "cl4/error.hpp"
#include "cl4/formula.hpp"
#include "cl4/syntax.hpp"

namespace cl4 {

enum class Logic { CL4, CL3 };

/// Terms offered to ⊔x-Choose. Occurring: constants and free variables of the
/// goal. The fresh variants add the smallest one (or two) naturals not
/// occurring in the goal.
enum class TermPool { Occurring, OccurringPlusFresh, OccurringPlusTwoFresh };

struct ProverConfig {
  Logic logic = Logic::CL4;
  TermPool term_pool = TermPool::OccurringPlusFresh;
  bool memoization = true;
  std::optional<std::size_t> depth_limit;
  /// When a general letter has exactly one positive and one negative
  /// occurrence, both on the surface, only that Match is explored. Matching
  /// such a pair only turns two ⊥ leaves of the elementarization into
  /// literals, so no proof is lost.
  bool forced_match = true;
};

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

struct Wait {
  friend bool operator==(const Wait&, const Wait&) = default;
};
struct ChooseDisjunct {
  Path path;
  std::size_t index = 0;
  friend bool operator==(const ChooseDisjunct&, const ChooseDisjunct&) = default;
};
struct ChooseTerm {
  Path path;
  Term term = Term::constant(0);
  friend bool operator==(const ChooseTerm&, const ChooseTerm&) = default;
};
struct MatchPair {
  Path pos_path;
  Path neg_path;
  LetterId fresh;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

using Move = std::variant<ChooseDisjunct, ChooseTerm, MatchPair>;
using Rule = std::variant<Wait, ChooseDisjunct, ChooseTerm, MatchPair>;

inline Rule to_rule(const Move& m) {
  return std::visit([](const auto& x) -> Rule { return x; }, m);
}

inline std::optional<Move> as_move(const Rule& r) {
  return std::visit(
      [](const auto& x) -> std::optional<Move> {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Wait>) return std::nullopt;
        else return Move{x};
      },
      r);
}

inline std::string rule_name(const Rule& r) {
  switch (r.index()) {
    case 0: return "wait";
    case 1: return "choose-disjunct";
    case 2: return "choose-term";
    default: return "match";
  }
}

struct ProofNode {
  Formula conclusion;
  Rule rule;
  std::vector<ProofNode> premises;

  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

inline std::size_t proof_height(const ProofNode& n) {
  std::size_t h = 0;
  for (const ProofNode& p : n.premises) h = std::max(h, proof_height(p));
  return h + 1;
}

inline std::size_t proof_size(const ProofNode& n) {
  std::size_t s = 1;
  for (const ProofNode& p : n.premises) s += proof_size(p);
  return s;
}

/// μ: choice connective and quantifier occurrences plus general atom
/// occurrences. Every rule strictly decreases it.
inline std::size_t measure(const Formula& f) {
  std::size_t m = (is_choice(f.kind()) || f.is_general_atom()) ? 1 : 0;
  for (const Formula& c : f.children()) m += measure(c);
  return m;
}

// ---------------------------------------------------------------------------
// Rule applications
// ---------------------------------------------------------------------------

/// The premise set of Wait: one formula per surface ⊓-operand and one per
/// surface ⊓x (body with a fresh variable), left to right, without duplicates.
/// Stability is not checked here.
inline std::vector<Formula> wait_premises(const Formula& f) {
  auto occs = surface_occurrences_if(f, [](const Formula& g) { return g.is(Kind::ChoAnd) || g.is(Kind::ChoAll); });
  std::vector<Formula> out;
  auto add = [&out](Formula g) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  };
  std::optional<std::string> fresh;
  for (const Occurrence& o : occs) {
    if (o.formula.is(Kind::ChoAnd)) {
      for (const Formula& operand : o.formula.children()) add(replace_at(f, o.path, operand));
    } else {
      if (!fresh) fresh = fresh_variable(f);
      add(replace_at(f, o.path, substitute_var(o.formula.body(), o.formula.var(), Term::variable(*fresh))));
    }
  }
  return out;
}

namespace detail {
inline Formula surface_target(const Formula& f, const Path& p, const char* what) {
  if (!is_surface_path(f, p)) throw RuleError(std::string(what) + " path " + p.to_string() + " is not a surface occurrence");
  return *subformula_at(f, p);
}
}  // namespace detail

/// Premise obtained by applying a ⊔-Choose, ⊔x-Choose or Match move backwards.
inline Formula apply_move(const Formula& f, const Move& move) {
  if (const auto* m = std::get_if<ChooseDisjunct>(&move)) {
    Formula target = detail::surface_target(f, m->path, "choose-disjunct");
    if (!target.is(Kind::ChoOr)) throw RuleError("choose-disjunct target " + m->path.to_string() + " is not a choice disjunction");
    if (m->index >= target.children().size()) throw RuleError("choose-disjunct index out of range");
    return replace_at(f, m->path, target.child(m->index));
  }
  if (const auto* m = std::get_if<ChooseTerm>(&move)) {
    Formula target = detail::surface_target(f, m->path, "choose-term");
    if (!target.is(Kind::ChoEx)) throw RuleError("choose-term target " + m->path.to_string() + " is not a choice existential");
    if (m->term.is_variable() && bound_variables(f).contains(m->term.name()))
      throw RuleError("choose-term term '" + m->term.name() + "' has bound occurrences");
    return replace_at(f, m->path, substitute_var(target.body(), target.var(), m->term));
  }
  const auto& m = std::get<MatchPair>(move);
  Formula pos = detail::surface_target(f, m.pos_path, "match");
  Formula neg = detail::surface_target(f, m.neg_path, "match");
  if (!pos.is_general_atom() || !neg.is_general_atom()) throw RuleError("match targets must be general atoms");
  if (pos.negated() || !neg.negated() || m.pos_path == m.neg_path) throw RuleError("polarity pair violated");
  if (pos.letter() != neg.letter()) throw RuleError("match targets have different letters");
  if (m.fresh.sort != Sort::Elementary || m.fresh.arity != pos.letter().arity || !is_letter_name(m.fresh.name))
    throw RuleError("match replacement must be an elementary letter of the same arity");
  if (letter_names(f).contains(m.fresh.name)) throw RuleError("match replacement letter '" + m.fresh.name + "' occurs in the conclusion");
  Formula out = replace_at(f, m.pos_path, pos.with_letter(m.fresh));
  return replace_at(out, m.neg_path, neg.with_letter(m.fresh));
}

inline Formula apply_rule_move(const Formula& f, const Rule& r) {
  auto m = as_move(r);
  if (!m) throw RuleError("wait is not a move");
  return apply_move(f, *m);
}

inline std::vector<Term> term_pool(const Formula& f, TermPool pool) {
  std::set<std::uint64_t> cs = constants(f);
  std::size_t extra = pool == TermPool::Occurring ? 0 : pool == TermPool::OccurringPlusFresh ? 1 : 2;
  for (std::uint64_t c = 0; extra > 0; ++c) {
    if (!cs.contains(c)) {
      cs.insert(c);
      --extra;
    }
  }
  std::vector<Term> out;
  for (std::uint64_t c : cs) out.push_back(Term::constant(c));
  for (const std::string& v : free_variables(f)) out.push_back(Term::variable(v));
  return out;
}

/// General letters in order of their first surface occurrence.
inline std::vector<LetterId> surface_general_letters(const Formula& f) {
  std::vector<LetterId> out;
  for (const Occurrence& o : surface_occurrences_if(f, [](const Formula& g) { return g.is_general_atom(); }))
    if (std::find(out.begin(), out.end(), o.formula.letter()) == out.end()) out.push_back(o.formula.letter());
  return out;
}

/// All Match moves for `letter`: each positive surface occurrence paired with
/// each negative one.
inline std::vector<MatchPair> match_moves_for(const Formula& f, const LetterId& letter) {
  auto pos = surface_occurrences(f, OccurrenceKind::GeneralPositive);
  auto neg = surface_occurrences(f, OccurrenceKind::GeneralNegative);
  std::vector<MatchPair> out;
  for (const Occurrence& p : pos) {
    if (p.formula.letter() != letter) continue;
    for (const Occurrence& n : neg)
      if (n.formula.letter() == letter) out.push_back({p.path, n.path, fresh_elementary_letter(f, letter)});
  }
  return out;
}

/// The leftmost Match whose letter occurs exactly once positively and once
/// negatively in the whole formula, both occurrences on the surface.
inline std::optional<MatchPair> forced_match(const Formula& f) {
  for (const LetterId& l : surface_general_letters(f)) {
    if (polarity_counts(f, l) != std::pair<std::size_t, std::size_t>{1, 1}) continue;
    auto moves = match_moves_for(f, l);
    if (moves.size() == 1) return moves.front();
  }
  return std::nullopt;
}

/// Every applicable move in exploration order: ⊔-Choose, then ⊔x-Choose, then
/// Match (CL4 only), each left to right.
inline std::vector<Move> enumerate_moves(const Formula& f, const ProverConfig& cfg) {
  std::vector<Move> out;
  for (const Occurrence& o : surface_occurrences(f, OccurrenceKind::ChoiceDisjunction))
    for (std::size_t i = 0; i < o.formula.children().size(); ++i) out.push_back(ChooseDisjunct{o.path, i});
  auto exists = surface_occurrences(f, OccurrenceKind::ChoiceExistential);
  if (!exists.empty()) {
    auto bound = bound_variables(f);
    auto pool = term_pool(f, cfg.term_pool);
    for (const Occurrence& o : exists)
      for (const Term& t : pool)
        if (!t.is_variable() || !bound.contains(t.name())) out.push_back(ChooseTerm{o.path, t});
  }
  if (cfg.logic == Logic::CL4)
    for (const LetterId& l : surface_general_letters(f))
      for (MatchPair& m : match_moves_for(f, l)) out.push_back(std::move(m));
  return out;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct SearchStats {
  std::size_t max_depth = 0;
  std::size_t nodes = 0;
  std::size_t memo_hits = 0;
};

struct SearchResult {
  std::optional<ProofNode> proof;
  SearchStats stats;
};

/// Called with every elementarization whose validity the search decides.
using ElementarizationHook = std::function<void(const Formula&)>;

namespace detail {

class ProofSearch {
 public:
  ProofSearch(const ProverConfig& cfg, const ElementarizationHook& hook) : cfg_(cfg), hook_(hook) {}

  std::optional<ProofNode> run(const Formula& f, std::size_t depth) {
    if (cfg_.depth_limit && depth > *cfg_.depth_limit)
      throw DepthLimitExceeded("recursion depth " + std::to_string(depth) + " exceeds the configured limit");
    stats.max_depth = std::max(stats.max_depth, depth);
    ++stats.nodes;

    std::string key;
    if (cfg_.memoization) {
      key = render_formula(f);
      if (auto it = memo_.find(key); it != memo_.end()) {
        ++stats.memo_hits;
        return it->second;
      }
    }
    auto result = expand(f, depth);
    if (cfg_.memoization) memo_.emplace(std::move(key), result);
    return result;
  }

  SearchStats stats;

 private:
  std::optional<ProofNode> expand(const Formula& f, std::size_t depth) {
    Formula elem = elementarize(f);
    if (hook_) hook_(elem);
    if (is_valid_classical(elem)) {
      ProofNode node{f, Wait{}, {}};
      bool all = true;
      for (const Formula& p : wait_premises(f)) {
        auto sub = run(p, depth + 1);
        if (!sub) {
          all = false;
          break;
        }
        node.premises.push_back(std::move(*sub));
      }
      if (all) return node;
    }
    if (cfg_.logic == Logic::CL4 && cfg_.forced_match) {
      if (auto m = forced_match(f)) return try_move(f, *m, depth);
    }
    for (const Move& m : enumerate_moves(f, cfg_))
      if (auto node = try_move(f, m, depth)) return node;
    return std::nullopt;
  }

  std::optional<ProofNode> try_move(const Formula& f, const Move& m, std::size_t depth) {
    auto sub = run(apply_move(f, m), depth + 1);
    if (!sub) return std::nullopt;
    ProofNode node{f, to_rule(m), {}};
    node.premises.push_back(std::move(*sub));
    return node;
  }

  const ProverConfig& cfg_;
  const ElementarizationHook& hook_;
  std::unordered_map<std::string, std::optional<ProofNode>> memo_;
};

}  // namespace detail

/// Backward AND-OR proof search. Wait is tried first when the goal is stable,
/// then the moves of enumerate_moves in order. The first proof found is
/// returned, so results are deterministic.
inline SearchResult search(const Formula& goal, const ProverConfig& cfg = {}, const ElementarizationHook& hook = {}) {
  require_well_formed(goal);
  if (cfg.logic == Logic::CL3 && has_general_letters(goal))
    throw FormulaError("CL3 goals may not contain general letters");
  detail::ProofSearch s(cfg, hook);
  SearchResult r;
  r.proof = s.run(goal, 1);
  r.stats = s.stats;
  return r;
}

inline std::optional<ProofNode> prove(const Formula& goal, const ProverConfig& cfg = {}) {
  return search(goal, cfg).proof;
}

}  // namespace cl4

#endif  // CL4_PROVER_HPP
