#ifndef CL4_CORPUS_HPP
#define CL4_CORPUS_HPP

// Families of small QBFs for agreement runs.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cl4/error.hpp"
#include "cl4/qbf.hpp"

namespace cl4 {

struct CorpusSpec {
  enum class Mode { Exhaustive, Random };
  Mode mode = Mode::Exhaustive;
  std::size_t prefix_length = 1;  // odd, or 0 for an empty corpus
  std::size_t min_clauses = 0;
  std::size_t max_clauses = 3;
  std::size_t count = 0;  // random mode only
  std::uint64_t seed = 1;
};

/// x, y, z, u, v for short prefixes, x1, x2, ... otherwise.
inline std::vector<QuantifiedVar> alternating_prefix(std::size_t n) {
  static const char* short_names[] = {"x", "y", "z", "u", "v"};
  std::vector<QuantifiedVar> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = n <= 5 ? short_names[i] : "x" + std::to_string(i + 1);
    out.push_back({i % 2 == 0 ? Quantifier::Exists : Quantifier::Forall, name});
  }
  return out;
}

/// Every ordered triple of literals over the prefix variables.
inline std::vector<Clause> all_clauses(const std::vector<QuantifiedVar>& prefix) {
  std::vector<Literal> lits;
  for (const QuantifiedVar& qv : prefix)
    for (bool positive : {true, false}) lits.push_back({qv.var, positive});
  std::vector<Clause> out;
  for (const Literal& a : lits)
    for (const Literal& b : lits)
      for (const Literal& c : lits) out.push_back({a, b, c});
  return out;
}

/// Exhaustive mode: every multiset of min..max clauses drawn from
/// all_clauses, in lexicographic order of clause indices. Random mode: `count`
/// matrices with a uniform clause count and uniform clauses.
inline std::vector<Qbf> generate_corpus(const CorpusSpec& spec) {
  std::vector<Qbf> out;
  if (spec.prefix_length == 0) return out;
  if (spec.prefix_length % 2 == 0) throw QbfError("corpus prefix length must be odd");
  if (spec.min_clauses > spec.max_clauses) throw QbfError("corpus clause bounds are inverted");
  auto prefix = alternating_prefix(spec.prefix_length);
  auto clauses = all_clauses(prefix);

  if (spec.mode == CorpusSpec::Mode::Random) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> width(spec.min_clauses, spec.max_clauses);
    std::uniform_int_distribution<std::size_t> pick(0, clauses.size() - 1);
    for (std::size_t i = 0; i < spec.count; ++i) {
      Qbf q{prefix, {}};
      for (std::size_t k = width(rng); k > 0; --k) q.matrix.push_back(clauses[pick(rng)]);
      out.push_back(std::move(q));
    }
    return out;
  }

  std::vector<std::size_t> chosen;
  auto emit = [&](std::size_t from, const auto& self) -> void {
    if (chosen.size() >= spec.min_clauses) {
      Qbf q{prefix, {}};
      for (std::size_t i : chosen) q.matrix.push_back(clauses[i]);
      out.push_back(std::move(q));
    }
    if (chosen.size() == spec.max_clauses) return;
    for (std::size_t i = from; i < clauses.size(); ++i) {
      chosen.push_back(i);
      self(i, self);
      chosen.pop_back();
    }
  };
  emit(0, emit);
  return out;
}

}  // namespace cl4

#endif  // CL4_CORPUS_HPP
