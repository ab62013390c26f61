#ifndef CL4_REDUCTION_HPP
#define CL4_REDUCTION_HPP

// Polynomial-time translation of strictly alternating 3-CNF QBFs into
// formulas whose provability coincides with the truth of the QBF.

#include <optional>
#include <string>
#include <vector>

#include "cl4/error.hpp"
#include "cl4/formula.hpp"
#include "cl4/qbf.hpp"

namespace cl4 {

namespace detail {

inline std::optional<Formula> remove_leftmost_quantifier(const Formula& f, const Term& c) {
  if (is_quantifier(f.kind())) return substitute_var(f.body(), f.var(), c);
  for (std::size_t i = 0; i < f.children().size(); ++i) {
    if (auto sub = remove_leftmost_quantifier(f.child(i), c)) {
      std::vector<Formula> kids(f.children().begin(), f.children().end());
      kids[i] = std::move(*sub);
      return f.with_children(std::move(kids));
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Removes the textually leftmost choice quantifier and replaces its
/// variable by the constant `c`.
inline Formula qm(const Formula& f, const Term& c) {
  if (!c.is_constant()) throw FormulaError("qm requires a constant term");
  auto out = detail::remove_leftmost_quantifier(f, c);
  if (!out) throw FormulaError("qm: formula has no choice quantifier");
  return *out;
}

inline Formula qm(const Formula& f, std::uint64_t c) { return qm(f, Term::constant(c)); }

namespace detail {

class Reducer {
 public:
  Reducer(const Qbf& q, Sort sort) : q_(q), sort_(sort) {}

  Formula run() { return level(0); }

 private:
  LetterId next_letter(char base, std::size_t& counter) {
    char c = sort_ == Sort::General ? base : static_cast<char>(base - 'A' + 'a');
    return LetterId{sort_, std::string(1, c) + std::to_string(++counter), 1};
  }

  Formula level(std::size_t i) {
    if (i == q_.prefix.size()) return matrix();
    const QuantifiedVar& qv = q_.prefix[i];
    if (qv.quantifier == Quantifier::Exists) return Formula::cho_ex(qv.var, level(i + 1));
    LetterId g = next_letter('P', forall_letters_);
    Formula choice = Formula::cho_and({Formula::atom(g, {Term::constant(0)}), Formula::atom(g, {Term::constant(1)})});
    Formula rest = Formula::par_and({Formula::atom(g, {Term::variable(qv.var)}, true), level(i + 1)});
    return Formula::par_or({choice, Formula::cho_ex(qv.var, rest)});
  }

  Formula literal(const Literal& l) {
    LetterId g = next_letter('L', literal_letters_);
    return Formula::par_or({Formula::atom(g, {Term::variable(l.var)}),
                            Formula::atom(g, {Term::constant(l.positive ? 1 : 0)}, true)});
  }

  Formula matrix() {
    std::vector<Formula> clauses;
    for (const Clause& c : q_.matrix) clauses.push_back(Formula::par_or({literal(c[0]), literal(c[1]), literal(c[2])}));
    if (clauses.empty()) return Formula::top();
    if (clauses.size() == 1) return clauses.front();
    return Formula::par_and(std::move(clauses));
  }

  const Qbf& q_;
  Sort sort_;
  std::size_t forall_letters_ = 0;
  std::size_t literal_letters_ = 0;
};

}  // namespace detail

/// Each ∃x becomes ⊔x; each ∀x becomes (P(0) ⊓ P(1)) ∨ ⊔x(¬P(x) ∧ rest); a
/// positive literal x becomes L(x) ∨ ¬L(1) and a negative one L(x) ∨ ¬L(0).
/// Letters are P1, P2, ... in prefix order and L1, L2, ... in matrix order.
inline Formula reduce_to_cl4(const Qbf& q) {
  require_valid(q);
  return detail::Reducer(q, Sort::General).run();
}

/// Same shape with elementary letters p1, ..., l1, ... throughout.
inline Formula reduce_to_cl3(const Qbf& q) {
  require_valid(q);
  return detail::Reducer(q, Sort::Elementary).run();
}

}  // namespace cl4

#endif  // CL4_REDUCTION_HPP
