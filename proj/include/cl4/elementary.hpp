#ifndef CL4_ELEMENTARY_HPP
#define CL4_ELEMENTARY_HPP

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cl4/error.hpp"
#include "cl4/formula.hpp"

namespace cl4 {

/// Elementarization. Surface ⊓ / ⊓x occurrences become ⊤, surface ⊔ / ⊔x
/// occurrences become ⊥, and every surface general literal becomes ⊥: a
/// positive one directly, a negative one because its atom is read as ⊤ and the
/// negation of ⊤ is ⊥.
///
/// The result keeps the parallel skeleton; nothing is simplified.
inline Formula elementarize(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot: return f;
    case Kind::Atom: return f.letter().sort == Sort::General ? Formula::bot() : f;
    case Kind::ChoAnd:
    case Kind::ChoAll: return Formula::top();
    case Kind::ChoOr:
    case Kind::ChoEx: return Formula::bot();
    case Kind::ParAnd:
    case Kind::ParOr: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const Formula& c : f.children()) kids.push_back(elementarize(c));
      return f.with_children(std::move(kids));
    }
  }
  return f;
}

/// Propositional key of an elementary atom: the letter applied to its exact
/// argument tuple. p(x) and p(0) are distinct keys.
inline std::string atom_key(const Formula& atom) {
  std::string key = atom.letter().name;
  key += '(';
  for (std::size_t i = 0; i < atom.args().size(); ++i) {
    if (i != 0) key += ',';
    key += atom.args()[i].to_string();
  }
  key += ')';
  return key;
}

namespace detail {

/// Small DPLL solver with unit propagation. Literals are ±(var+1).
class DpllSolver {
 public:
  explicit DpllSolver(std::size_t num_vars) : assignment_(num_vars, 0) {}

  void add_clause(std::vector<int> clause) { clauses_.push_back(std::move(clause)); }

  bool solve() { return search(); }

 private:
  int value(int lit) const {
    int v = assignment_[static_cast<std::size_t>(std::abs(lit) - 1)];
    return lit > 0 ? v : -v;
  }
  void set(int lit, std::vector<int>& trail) {
    assignment_[static_cast<std::size_t>(std::abs(lit) - 1)] = lit > 0 ? 1 : -1;
    trail.push_back(lit);
  }
  void undo(std::vector<int>& trail) {
    for (int lit : trail) assignment_[static_cast<std::size_t>(std::abs(lit) - 1)] = 0;
    trail.clear();
  }

  // Returns false on conflict.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : clauses_) {
        int unassigned = 0, last = 0;
        bool satisfied = false;
        for (int lit : clause) {
          int v = value(lit);
          if (v > 0) {
            satisfied = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = lit;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          set(last, trail);
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      return false;
    }
    std::size_t branch = assignment_.size();
    for (std::size_t i = 0; i < assignment_.size(); ++i)
      if (assignment_[i] == 0) {
        branch = i;
        break;
      }
    if (branch == assignment_.size()) return true;
    for (int polarity : {1, -1}) {
      std::vector<int> decision;
      set(polarity * static_cast<int>(branch + 1), decision);
      if (search()) return true;
      undo(decision);
    }
    undo(trail);
    return false;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<int> assignment_;
};

struct Constant {
  bool value;
};
using Encoded = std::variant<Constant, int>;

/// Polarity-aware (Plaisted–Greenbaum) encoding of the negation of an
/// elementary formula: the returned literal implies "f is false".
class FalsityEncoder {
 public:
  Encoded encode(const Formula& f) {
    switch (f.kind()) {
      case Kind::Top: return Constant{false};
      case Kind::Bot: return Constant{true};
      case Kind::Atom: {
        auto [it, fresh] = keys_.emplace(atom_key(f), static_cast<int>(num_vars_ + 1));
        if (fresh) ++num_vars_;
        return f.negated() ? it->second : -it->second;
      }
      case Kind::ParAnd:  // false iff some conjunct false
      case Kind::ParOr: {  // false iff every disjunct false
        bool any = f.is(Kind::ParAnd);
        std::vector<int> lits;
        for (const Formula& c : f.children()) {
          Encoded e = encode(c);
          if (auto* k = std::get_if<Constant>(&e)) {
            if (k->value == any) return Constant{any};
            continue;
          }
          lits.push_back(std::get<int>(e));
        }
        if (lits.empty()) return Constant{!any};
        if (lits.size() == 1) return lits.front();
        int aux = static_cast<int>(++num_vars_);
        if (any) {
          std::vector<int> clause{-aux};
          clause.insert(clause.end(), lits.begin(), lits.end());
          clauses_.push_back(std::move(clause));
        } else {
          for (int l : lits) clauses_.push_back({-aux, l});
        }
        return aux;
      }
      default:
        throw FormulaError("classical validity is defined only for elementary formulas");
    }
  }

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<std::vector<int>>& clauses() const { return clauses_; }
  std::size_t num_atom_keys() const { return keys_.size(); }

 private:
  std::map<std::string, int> keys_;
  std::vector<std::vector<int>> clauses_;
  std::size_t num_vars_ = 0;
};

}  // namespace detail

/// Classical validity of an elementary formula, treating each atom key as an
/// independent propositional atom. Decided by searching for a falsifying
/// assignment.
inline bool is_valid_classical(const Formula& f) {
  if (!is_elementary(f)) throw FormulaError("classical validity requires an elementary formula");
  detail::FalsityEncoder enc;
  detail::Encoded root = enc.encode(f);
  if (auto* k = std::get_if<detail::Constant>(&root)) return !k->value;
  detail::DpllSolver solver(enc.num_vars());
  for (const auto& c : enc.clauses()) solver.add_clause(c);
  solver.add_clause({std::get<int>(root)});
  return !solver.solve();
}

inline bool is_stable(const Formula& f) { return is_valid_classical(elementarize(f)); }

}  // namespace cl4

#endif  // CL4_ELEMENTARY_HPP
