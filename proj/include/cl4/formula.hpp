#ifndef CL4_FORMULA_HPP
#define CL4_FORMULA_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "cl4/error.hpp"

namespace cl4 {

// ---------------------------------------------------------------------------
// Lexical classes
// ---------------------------------------------------------------------------

/// Variables are x, y, z, u, v, w optionally followed by decimal digits.
inline bool is_variable_name(std::string_view s) {
  if (s.empty()) return false;
  if (std::string_view("xyzuvw").find(s.front()) == std::string_view::npos) return false;
  return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

inline bool is_keyword(std::string_view s) {
  return s == "call" || s == "cex" || s == "cor" || s == "cand";
}

/// Letter names are identifiers that are neither keywords nor variables.
inline bool is_letter_name(std::string_view s) {
  if (s.empty() || std::isalpha(static_cast<unsigned char>(s.front())) == 0) return false;
  for (unsigned char c : s) {
    if (std::isalnum(c) == 0 && c != '_') return false;
  }
  return !is_keyword(s) && !is_variable_name(s);
}

// ---------------------------------------------------------------------------
// Terms and letters
// ---------------------------------------------------------------------------

class Term {
 public:
  static Term variable(std::string name) {
    if (!is_variable_name(name)) throw FormulaError("not a variable name: '" + name + "'");
    Term t;
    t.value_ = std::move(name);
    return t;
  }
  static Term constant(std::uint64_t value) {
    Term t;
    t.value_ = value;
    return t;
  }

  bool is_variable() const noexcept { return std::holds_alternative<std::string>(value_); }
  bool is_constant() const noexcept { return !is_variable(); }
  const std::string& name() const { return std::get<std::string>(value_); }
  std::uint64_t value() const { return std::get<std::uint64_t>(value_); }

  std::string to_string() const { return is_variable() ? name() : std::to_string(value()); }

  friend bool operator==(const Term& a, const Term& b) { return a.value_ == b.value_; }
  friend bool operator<(const Term& a, const Term& b) { return a.value_ < b.value_; }

 private:
  Term() = default;
  std::variant<std::uint64_t, std::string> value_{std::uint64_t{0}};
};

enum class Sort { Elementary, General };

struct LetterId {
  Sort sort = Sort::Elementary;
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const LetterId&, const LetterId&) = default;
  friend bool operator<(const LetterId& a, const LetterId& b) {
    return std::tie(a.sort, a.name, a.arity) < std::tie(b.sort, b.name, b.arity);
  }
};

/// Builds a letter whose sort follows from the case of its initial character.
inline LetterId make_letter(std::string name, std::size_t arity) {
  if (!is_letter_name(name)) throw FormulaError("not a letter name: '" + name + "'");
  if (arity == 0 && (name == "T" || name == "F"))
    throw FormulaError("'" + name + "' is reserved for a logical atom");
  Sort sort = std::isupper(static_cast<unsigned char>(name.front())) != 0 ? Sort::General : Sort::Elementary;
  return LetterId{sort, std::move(name), arity};
}

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

enum class Kind { Top, Bot, Atom, ParAnd, ParOr, ChoAnd, ChoOr, ChoAll, ChoEx };

constexpr bool is_connective(Kind k) {
  return k == Kind::ParAnd || k == Kind::ParOr || k == Kind::ChoAnd || k == Kind::ChoOr;
}
constexpr bool is_quantifier(Kind k) { return k == Kind::ChoAll || k == Kind::ChoEx; }
constexpr bool is_choice(Kind k) {
  return k == Kind::ChoAnd || k == Kind::ChoOr || k == Kind::ChoAll || k == Kind::ChoEx;
}

/// Immutable CL4 formula. Copies share structure; equality is structural.
class Formula {
 public:
  Formula() : Formula(top()) {}

  static Formula top() { return Formula(make_node(Kind::Top)); }
  static Formula bot() { return Formula(make_node(Kind::Bot)); }

  static Formula atom(LetterId letter, std::vector<Term> args = {}, bool negated = false) {
    if (args.size() != letter.arity)
      throw FormulaError("letter '" + letter.name + "' has arity " + std::to_string(letter.arity) +
                         " but is applied to " + std::to_string(args.size()) + " terms");
    auto n = make_node(Kind::Atom);
    n->letter = std::move(letter);
    n->args = std::move(args);
    n->negated = negated;
    return Formula(std::move(n));
  }

  static Formula connective(Kind kind, std::vector<Formula> operands) {
    if (!is_connective(kind)) throw FormulaError("not a connective kind");
    if (operands.size() < 2) throw FormulaError("connectives take at least two operands");
    auto n = make_node(kind);
    n->children = std::move(operands);
    return Formula(std::move(n));
  }
  static Formula par_and(std::vector<Formula> ops) { return connective(Kind::ParAnd, std::move(ops)); }
  static Formula par_or(std::vector<Formula> ops) { return connective(Kind::ParOr, std::move(ops)); }
  static Formula cho_and(std::vector<Formula> ops) { return connective(Kind::ChoAnd, std::move(ops)); }
  static Formula cho_or(std::vector<Formula> ops) { return connective(Kind::ChoOr, std::move(ops)); }

  static Formula quantifier(Kind kind, std::string var, Formula body) {
    if (!is_quantifier(kind)) throw FormulaError("not a quantifier kind");
    if (!is_variable_name(var)) throw FormulaError("not a variable name: '" + var + "'");
    auto n = make_node(kind);
    n->var = std::move(var);
    n->children.push_back(std::move(body));
    return Formula(std::move(n));
  }
  static Formula cho_all(std::string var, Formula body) { return quantifier(Kind::ChoAll, std::move(var), std::move(body)); }
  static Formula cho_ex(std::string var, Formula body) { return quantifier(Kind::ChoEx, std::move(var), std::move(body)); }

  Kind kind() const noexcept { return node_->kind; }
  bool is(Kind k) const noexcept { return node_->kind == k; }

  const LetterId& letter() const { return node_->letter; }
  const std::vector<Term>& args() const { return node_->args; }
  bool negated() const { return node_->negated; }
  bool is_general_atom() const { return is(Kind::Atom) && letter().sort == Sort::General; }

  /// Operands of a connective, or the single body of a quantifier.
  std::span<const Formula> children() const { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const std::string& var() const { return node_->var; }
  const Formula& body() const { return node_->children.at(0); }

  /// Same atom with its letter replaced (arity must match).
  Formula with_letter(LetterId letter) const { return atom(std::move(letter), args(), negated()); }
  /// Same node with a new child list; kind and binder are preserved.
  Formula with_children(std::vector<Formula> children) const {
    if (is_quantifier(kind())) return quantifier(kind(), var(), std::move(children.at(0)));
    return connective(kind(), std::move(children));
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.negated == y.negated && x.letter == y.letter && x.args == y.args &&
           x.var == y.var && x.children == y.children;
  }

 private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    LetterId letter;
    std::vector<Term> args;
    bool negated = false;
    std::string var;
    std::vector<Formula> children;
  };

  static std::shared_ptr<Node> make_node(Kind k) { return std::make_shared<Node>(k); }
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// Address of a subformula occurrence: child indices from the root.
/// A quantifier's body is child 0.
struct Path {
  std::vector<std::size_t> steps;

  Path child(std::size_t i) const {
    Path p = *this;
    p.steps.push_back(i);
    return p;
  }
  bool empty() const noexcept { return steps.empty(); }
  bool is_prefix_of(const Path& other) const {
    return steps.size() <= other.steps.size() && std::equal(steps.begin(), steps.end(), other.steps.begin());
  }
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i != 0) s += ',';
      s += std::to_string(steps[i]);
    }
    return s + "]";
  }

  friend bool operator==(const Path&, const Path&) = default;
  friend bool operator<(const Path& a, const Path& b) { return a.steps < b.steps; }
};

inline std::optional<Formula> subformula_at(const Formula& f, const Path& p) {
  Formula cur = f;
  for (std::size_t i : p.steps) {
    if (i >= cur.children().size()) return std::nullopt;
    cur = cur.child(i);
  }
  return cur;
}

/// True if `p` resolves and no proper ancestor of the target is a choice node.
inline bool is_surface_path(const Formula& f, const Path& p) {
  Formula cur = f;
  for (std::size_t i : p.steps) {
    if (is_choice(cur.kind()) || i >= cur.children().size()) return false;
    cur = cur.child(i);
  }
  return true;
}

inline Formula replace_at(const Formula& f, const Path& p, const Formula& replacement, std::size_t depth = 0) {
  if (depth == p.steps.size()) return replacement;
  std::size_t i = p.steps[depth];
  if (i >= f.children().size()) throw FormulaError("path " + p.to_string() + " does not resolve");
  std::vector<Formula> kids(f.children().begin(), f.children().end());
  kids[i] = replace_at(kids[i], p, replacement, depth + 1);
  return f.with_children(std::move(kids));
}

// ---------------------------------------------------------------------------
// Surface occurrences
// ---------------------------------------------------------------------------

enum class OccurrenceKind {
  ChoiceConjunction,
  ChoiceDisjunction,
  ChoiceUniversal,
  ChoiceExistential,
  GeneralPositive,
  GeneralNegative,
};

struct Occurrence {
  Path path;
  Formula formula;
};

inline bool occurrence_matches(const Formula& f, OccurrenceKind k) {
  switch (k) {
    case OccurrenceKind::ChoiceConjunction: return f.is(Kind::ChoAnd);
    case OccurrenceKind::ChoiceDisjunction: return f.is(Kind::ChoOr);
    case OccurrenceKind::ChoiceUniversal: return f.is(Kind::ChoAll);
    case OccurrenceKind::ChoiceExistential: return f.is(Kind::ChoEx);
    case OccurrenceKind::GeneralPositive: return f.is_general_atom() && !f.negated();
    case OccurrenceKind::GeneralNegative: return f.is_general_atom() && f.negated();
  }
  return false;
}

namespace detail {
template <class Pred>
void collect_surface(const Formula& f, const Path& at, const Pred& pred, std::vector<Occurrence>& out) {
  if (pred(f)) out.push_back({at, f});
  if (is_choice(f.kind())) return;
  for (std::size_t i = 0; i < f.children().size(); ++i) collect_surface(f.child(i), at.child(i), pred, out);
}
}  // namespace detail

/// Surface occurrences satisfying `pred`, left to right (pre-order).
template <class Pred>
std::vector<Occurrence> surface_occurrences_if(const Formula& f, const Pred& pred) {
  std::vector<Occurrence> out;
  detail::collect_surface(f, Path{}, pred, out);
  return out;
}

inline std::vector<Occurrence> surface_occurrences(const Formula& f, OccurrenceKind kind) {
  return surface_occurrences_if(f, [kind](const Formula& g) { return occurrence_matches(g, kind); });
}

// ---------------------------------------------------------------------------
// Variables, constants, letters
// ---------------------------------------------------------------------------

namespace detail {
inline void collect_vars(const Formula& f, std::set<std::string>& bound_scope, std::set<std::string>& free,
                         std::set<std::string>& binders) {
  if (f.is(Kind::Atom)) {
    for (const Term& t : f.args())
      if (t.is_variable() && !bound_scope.contains(t.name())) free.insert(t.name());
    return;
  }
  if (is_quantifier(f.kind())) {
    binders.insert(f.var());
    bool inserted = bound_scope.insert(f.var()).second;
    collect_vars(f.body(), bound_scope, free, binders);
    if (inserted) bound_scope.erase(f.var());
    return;
  }
  for (const Formula& c : f.children()) collect_vars(c, bound_scope, free, binders);
}
}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> scope, free, binders;
  detail::collect_vars(f, scope, free, binders);
  return free;
}

/// Variables bound by some quantifier occurrence in `f`.
inline std::set<std::string> bound_variables(const Formula& f) {
  std::set<std::string> scope, free, binders;
  detail::collect_vars(f, scope, free, binders);
  return binders;
}

inline std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> scope, free, binders;
  detail::collect_vars(f, scope, free, binders);
  free.insert(binders.begin(), binders.end());
  return free;
}

inline void collect_constants(const Formula& f, std::set<std::uint64_t>& out) {
  if (f.is(Kind::Atom)) {
    for (const Term& t : f.args())
      if (t.is_constant()) out.insert(t.value());
    return;
  }
  for (const Formula& c : f.children()) collect_constants(c, out);
}

inline std::set<std::uint64_t> constants(const Formula& f) {
  std::set<std::uint64_t> out;
  collect_constants(f, out);
  return out;
}

/// Letters in order of first occurrence (pre-order), each listed once.
inline std::vector<LetterId> letters(const Formula& f) {
  std::vector<LetterId> out;
  auto visit = [&out](const Formula& g, const auto& self) -> void {
    if (g.is(Kind::Atom)) {
      if (std::find(out.begin(), out.end(), g.letter()) == out.end()) out.push_back(g.letter());
      return;
    }
    for (const Formula& c : g.children()) self(c, self);
  };
  visit(f, visit);
  return out;
}

inline std::set<std::string> letter_names(const Formula& f) {
  std::set<std::string> out;
  for (const LetterId& l : letters(f)) out.insert(l.name);
  return out;
}

inline bool has_general_letters(const Formula& f) {
  auto ls = letters(f);
  return std::any_of(ls.begin(), ls.end(), [](const LetterId& l) { return l.sort == Sort::General; });
}

inline bool has_elementary_letters(const Formula& f) {
  auto ls = letters(f);
  return std::any_of(ls.begin(), ls.end(), [](const LetterId& l) { return l.sort == Sort::Elementary; });
}

inline bool is_choiceless(const Formula& f) {
  if (is_choice(f.kind())) return false;
  return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_choiceless(c); });
}

inline bool is_elementary(const Formula& f) { return is_choiceless(f) && !has_general_letters(f); }

/// Occurrence count of atoms with the given letter, split by polarity.
inline std::pair<std::size_t, std::size_t> polarity_counts(const Formula& f, const LetterId& letter) {
  std::pair<std::size_t, std::size_t> counts{0, 0};
  auto visit = [&](const Formula& g, const auto& self) -> void {
    if (g.is(Kind::Atom)) {
      if (g.letter() == letter) (g.negated() ? counts.second : counts.first)++;
      return;
    }
    for (const Formula& c : g.children()) self(c, self);
  };
  visit(f, visit);
  return counts;
}

// ---------------------------------------------------------------------------
// Well-formedness
// ---------------------------------------------------------------------------

/// Describes the first violated formula invariant, if any: consistent letter
/// arities, no variable both free and bound, one binder per variable.
inline std::optional<std::string> well_formedness_violation(const Formula& f) {
  std::map<std::pair<Sort, std::string>, std::size_t> arity;
  std::map<std::string, std::size_t> binder_count;
  std::optional<std::string> problem;
  auto visit = [&](const Formula& g, const auto& self) -> void {
    if (problem) return;
    if (g.is(Kind::Atom)) {
      auto [it, fresh] = arity.emplace(std::pair{g.letter().sort, g.letter().name}, g.letter().arity);
      if (!fresh && it->second != g.letter().arity)
        problem = "letter '" + g.letter().name + "' used with arities " + std::to_string(it->second) + " and " +
                  std::to_string(g.letter().arity);
      return;
    }
    if (is_quantifier(g.kind()) && ++binder_count[g.var()] > 1) {
      problem = "variable '" + g.var() + "' is bound by more than one quantifier";
      return;
    }
    for (const Formula& c : g.children()) self(c, self);
  };
  visit(f, visit);
  if (problem) return problem;
  auto free = free_variables(f);
  for (const auto& [v, n] : binder_count)
    if (free.contains(v)) return "variable '" + v + "' has both free and bound occurrences";
  return std::nullopt;
}

inline void require_well_formed(const Formula& f) {
  if (auto why = well_formedness_violation(f)) throw FormulaError(*why);
}

// ---------------------------------------------------------------------------
// Substitution and fresh names
// ---------------------------------------------------------------------------

namespace detail {
inline Formula substitute_unchecked(const Formula& f, const std::string& v, const Term& t) {
  if (f.is(Kind::Atom)) {
    bool hit = false;
    std::vector<Term> args = f.args();
    for (Term& a : args)
      if (a.is_variable() && a.name() == v) {
        a = t;
        hit = true;
      }
    return hit ? Formula::atom(f.letter(), std::move(args), f.negated()) : f;
  }
  if (f.children().empty()) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const Formula& c : f.children()) kids.push_back(substitute_unchecked(c, v, t));
  return f.with_children(std::move(kids));
}
}  // namespace detail

/// Replaces every free occurrence of `v` by `t`. Requires that `v` is not bound
/// anywhere in `f` and that a variable `t` is not bound anywhere in `f`, so no
/// capture can occur.
inline Formula substitute_var(const Formula& f, const std::string& v, const Term& t) {
  auto binders = bound_variables(f);
  if (binders.contains(v)) throw FormulaError("substitution target '" + v + "' has bound occurrences");
  if (t.is_variable() && binders.contains(t.name()))
    throw FormulaError("substituted variable '" + t.name() + "' has bound occurrences");
  return detail::substitute_unchecked(f, v, t);
}

/// Smallest reserved variable w0, w1, ... not occurring in `f`.
inline std::string fresh_variable(const Formula& f) {
  auto used = all_variables(f);
  for (std::size_t k = 0;; ++k) {
    std::string candidate = "w" + std::to_string(k);
    if (!used.contains(candidate)) return candidate;
  }
}

/// Fresh elementary counterpart of a general letter: the lowercased name with
/// the smallest suffix `_k` not occurring among the letters of `f`.
inline LetterId fresh_elementary_letter(const Formula& f, const LetterId& general) {
  std::string base;
  for (unsigned char c : general.name) base += static_cast<char>(std::tolower(c));
  auto used = letter_names(f);
  for (std::size_t k = 0;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!used.contains(candidate)) return LetterId{Sort::Elementary, candidate, general.arity};
  }
}

/// Number of nodes.
inline std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const Formula& c : f.children()) n += formula_size(c);
  return n;
}

}  // namespace cl4

#endif  // CL4_FORMULA_HPP
