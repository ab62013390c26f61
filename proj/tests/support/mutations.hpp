#ifndef CL4_TESTS_MUTATIONS_HPP
#define CL4_TESTS_MUTATIONS_HPP

// Single-point corruptions of a proof, each of which a sound checker must
// reject.

#include <string>
#include <vector>

#include "cl4/prover.hpp"

namespace mutate {

struct Mutant {
  std::string what;
  cl4::ProofNode proof;
};

namespace detail {

using cl4::ChooseDisjunct;
using cl4::ChooseTerm;
using cl4::MatchPair;
using cl4::Path;
using cl4::ProofNode;
using cl4::Wait;

inline Path perturbed(Path p) {
  if (p.steps.empty()) p.steps.push_back(0);
  else ++p.steps.back();
  return p;
}

// Every mutation of the node itself.
inline std::vector<std::pair<std::string, ProofNode>> local(const ProofNode& n) {
  std::vector<std::pair<std::string, ProofNode>> out;
  auto add = [&](std::string what, auto rule, std::vector<ProofNode> premises) {
    out.emplace_back(std::move(what), ProofNode{n.conclusion, rule, std::move(premises)});
  };
  if (std::holds_alternative<Wait>(n.rule)) {
    add("flip wait", ChooseDisjunct{Path{}, 0}, n.premises);
    if (!n.premises.empty()) {
      std::vector<ProofNode> fewer(n.premises.begin() + 1, n.premises.end());
      add("delete wait premise", Wait{}, fewer);
    }
  } else if (const auto* d = std::get_if<ChooseDisjunct>(&n.rule)) {
    add("flip choose-disjunct", ChooseTerm{d->path, cl4::Term::constant(0)}, n.premises);
    add("perturb choose-disjunct path", ChooseDisjunct{perturbed(d->path), d->index}, n.premises);
  } else if (const auto* t = std::get_if<ChooseTerm>(&n.rule)) {
    add("flip choose-term", ChooseDisjunct{t->path, 0}, n.premises);
    add("perturb choose-term path", ChooseTerm{perturbed(t->path), t->term}, n.premises);
    auto target = cl4::subformula_at(n.conclusion, t->path);
    if (target && cl4::is_quantifier(target->kind()))
      add("bound choose-term", ChooseTerm{t->path, cl4::Term::variable(target->var())}, n.premises);
  } else {
    const auto& m = std::get<MatchPair>(n.rule);
    add("flip match", Wait{}, n.premises);
    add("perturb match path", MatchPair{perturbed(m.pos_path), m.neg_path, m.fresh}, n.premises);
    add("break match polarity", MatchPair{m.pos_path, m.pos_path, m.fresh}, n.premises);
  }
  return out;
}

inline void collect(const ProofNode& n, std::vector<std::size_t>& addr, const ProofNode& root,
                    std::vector<Mutant>& out);

// Rebuilds `root` with the node at `addr` replaced.
inline ProofNode with_node(const ProofNode& root, const std::vector<std::size_t>& addr, std::size_t depth,
                           const ProofNode& repl) {
  if (depth == addr.size()) return repl;
  ProofNode copy = root;
  copy.premises[addr[depth]] = with_node(root.premises[addr[depth]], addr, depth + 1, repl);
  return copy;
}

inline void collect(const ProofNode& n, std::vector<std::size_t>& addr, const ProofNode& root,
                    std::vector<Mutant>& out) {
  for (auto& [what, node] : local(n)) {
    std::string where = "root";
    for (std::size_t i : addr) where += "/" + std::to_string(i);
    out.push_back({what + " at " + where, with_node(root, addr, 0, node)});
  }
  for (std::size_t i = 0; i < n.premises.size(); ++i) {
    addr.push_back(i);
    collect(n.premises[i], addr, root, out);
    addr.pop_back();
  }
}

}  // namespace detail

/// Every mutation at every node: rule-tag flips, path perturbations, broken
/// Match polarity, a deleted Wait premise, and a ChooseTerm term replaced by
/// the quantifier's own bound variable.
inline std::vector<Mutant> all_mutants(const cl4::ProofNode& root) {
  std::vector<Mutant> out;
  std::vector<std::size_t> addr;
  detail::collect(root, addr, root, out);
  return out;
}

}  // namespace mutate

#endif  // CL4_TESTS_MUTATIONS_HPP
