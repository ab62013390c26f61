#ifndef CL4_QBF_HPP
#define CL4_QBF_HPP

// Prenex, strictly alternating, 3-CNF quantified Boolean formulas; the formula
// game; and strategy trees for Player E.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cl4/diagnostics.hpp"
#include "cl4/error.hpp"
#include "cl4/formula.hpp"

namespace cl4 {

enum class Quantifier { Exists, Forall };

struct QuantifiedVar {
  Quantifier quantifier;
  std::string var;
  bool operator==(const QuantifiedVar&) const = default;
};

struct Literal {
  std::string var;
  bool positive = true;
  bool operator==(const Literal&) const = default;
};

using Clause = std::array<Literal, 3>;

struct Qbf {
  std::vector<QuantifiedVar> prefix;
  std::vector<Clause> matrix;
  bool operator==(const Qbf&) const = default;
};

/// Prenex CNF before normalization: any prefix, any clause width.
struct RawQbf {
  std::vector<QuantifiedVar> prefix;
  std::vector<std::vector<Literal>> clauses;
};

inline std::optional<std::string> qbf_violation(const std::vector<QuantifiedVar>& prefix,
                                                const std::vector<std::vector<Literal>>& clauses) {
  if (prefix.empty()) return "empty quantifier prefix";
  std::set<std::string> seen;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (!is_variable_name(prefix[i].var)) return "'" + prefix[i].var + "' is not a variable name";
    if (!seen.insert(prefix[i].var).second) return "variable '" + prefix[i].var + "' quantified twice";
    if (i > 0 && prefix[i].quantifier == prefix[i - 1].quantifier)
      return "quantifiers do not strictly alternate at '" + prefix[i].var + "'";
  }
  if (prefix.front().quantifier != Quantifier::Exists || prefix.back().quantifier != Quantifier::Exists)
    return "first and last quantifiers must be exists";
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    if (clauses[c].size() != 3)
      return "clause width " + std::to_string(clauses[c].size()) + " in clause " + std::to_string(c + 1) +
             " (expected 3)";
    for (const Literal& l : clauses[c])
      if (!seen.contains(l.var)) return "unbound variable '" + l.var + "'";
  }
  return std::nullopt;
}

inline std::optional<std::string> qbf_violation(const Qbf& q) {
  std::vector<std::vector<Literal>> clauses;
  for (const Clause& c : q.matrix) clauses.emplace_back(c.begin(), c.end());
  return qbf_violation(q.prefix, clauses);
}

inline void require_valid(const Qbf& q) {
  if (auto why = qbf_violation(q)) throw QbfError(*why);
}

/// Repairs a prenex CNF: dummy variables restore strict alternation and the
/// ∃ endpoints, and clauses shorter than 3 repeat their last literal.
inline Qbf normalize_qbf(const std::vector<QuantifiedVar>& prefix, const std::vector<std::vector<Literal>>& clauses) {
  std::set<std::string> used;
  for (const QuantifiedVar& qv : prefix) {
    if (!is_variable_name(qv.var)) throw QbfError("'" + qv.var + "' is not a variable name");
    if (!used.insert(qv.var).second) throw QbfError("variable '" + qv.var + "' quantified twice");
  }
  for (const auto& c : clauses) {
    if (c.empty()) throw QbfError("clause width 0 cannot be padded");
    if (c.size() > 3) throw QbfError("clause width " + std::to_string(c.size()) + " exceeds 3");
    for (const Literal& l : c)
      if (!used.contains(l.var)) throw QbfError("unbound variable '" + l.var + "'");
  }
  std::size_t counter = 0;
  auto dummy = [&](Quantifier k) {
    std::string name;
    do name = "u" + std::to_string(counter++);
    while (used.contains(name));
    used.insert(name);
    return QuantifiedVar{k, name};
  };

  Qbf q;
  for (const QuantifiedVar& qv : prefix) {
    if (q.prefix.empty()) {
      if (qv.quantifier == Quantifier::Forall) q.prefix.push_back(dummy(Quantifier::Exists));
    } else if (q.prefix.back().quantifier == qv.quantifier) {
      q.prefix.push_back(dummy(qv.quantifier == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists));
    }
    q.prefix.push_back(qv);
  }
  if (q.prefix.empty() || q.prefix.back().quantifier == Quantifier::Forall) q.prefix.push_back(dummy(Quantifier::Exists));
  for (const auto& c : clauses) {
    Clause padded;
    for (std::size_t i = 0; i < 3; ++i) padded[i] = c[std::min(i, c.size() - 1)];
    q.matrix.push_back(padded);
  }
  return q;
}

inline Qbf normalize_qbf(const RawQbf& raw) { return normalize_qbf(raw.prefix, raw.clauses); }

enum class QbfFormat { Qdimacs, Textual };

namespace detail {

inline RawQbf parse_qdimacs(std::string_view text) {
  RawQbf raw;
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::pair<long, long>> header;
  std::vector<Literal> pending;
  std::set<long> quantified;
  std::size_t lineno = 0;
  auto name = [](long v) { return "x" + std::to_string(v); };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + what, lineno);
  };
  auto read_int = [&](std::istringstream& ls, long& v) -> bool {
    std::string tok;
    if (!(ls >> tok)) return false;
    std::size_t used = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw fail("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw fail("expected an integer, got '" + tok + "'");
    return true;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "p") {
      std::string fmt;
      long v = 0, c = 0;
      if (header || !raw.prefix.empty() || !raw.clauses.empty()) throw fail("misplaced problem line");
      if (!(ls >> fmt) || fmt != "cnf" || !read_int(ls, v) || !read_int(ls, c) || v < 0 || c < 0)
        throw fail("malformed problem line");
      header = {v, c};
      continue;
    }
    if (first == "e" || first == "a") {
      if (!raw.clauses.empty() || !pending.empty()) throw fail("quantifier line after clauses");
      Quantifier k = first == "e" ? Quantifier::Exists : Quantifier::Forall;
      long v = 0;
      bool closed = false;
      while (read_int(ls, v)) {
        if (v == 0) {
          closed = true;
          break;
        }
        if (v < 0) throw fail("negative variable in quantifier line");
        if (header && v > header->first) throw fail("variable " + std::to_string(v) + " exceeds header count");
        if (!quantified.insert(v).second) throw fail("variable " + std::to_string(v) + " quantified twice");
        raw.prefix.push_back({k, name(v)});
      }
      if (!closed) throw fail("quantifier line not terminated by 0");
      continue;
    }
    std::istringstream all(line);
    long v = 0;
    while (read_int(all, v)) {
      if (v == 0) {
        raw.clauses.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      long a = v < 0 ? -v : v;
      if (header && a > header->first) throw fail("variable " + std::to_string(a) + " exceeds header count");
      pending.push_back({name(a), v > 0});
    }
  }
  if (!pending.empty()) throw ParseError("last clause not terminated by 0", lineno);
  if (header && static_cast<std::size_t>(header->second) != raw.clauses.size())
    throw ParseError("header announces " + std::to_string(header->second) + " clauses, found " +
                         std::to_string(raw.clauses.size()),
                     lineno);
  return raw;
}

class TextualQbfParser {
 public:
  explicit TextualQbfParser(std::string_view s) : s_(s) {}

  RawQbf parse() {
    RawQbf raw;
    while (true) {
      std::string w = peek_word();
      if (w != "exists" && w != "forall") break;
      word();
      std::string v = word();
      if (!is_variable_name(v)) throw ParseError("'" + v + "' is not a variable name", pos_);
      raw.prefix.push_back({w == "exists" ? Quantifier::Exists : Quantifier::Forall, v});
    }
    expect(':');
    if (peek_word() == "true") {
      word();
    } else {
      do {
        raw.clauses.push_back(clause());
      } while (accept('&'));
    }
    skip_space();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return raw;
  }

 private:
  std::vector<Literal> clause() {
    expect('(');
    std::vector<Literal> lits;
    do {
      bool positive = !(accept('-') || accept('~'));
      std::string v = word();
      if (!is_variable_name(v)) throw ParseError("'" + v + "' is not a variable name", pos_);
      lits.push_back({v, positive});
    } while (accept('|'));
    expect(')');
    return lits;
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }
  std::string peek_word() {
    std::size_t save = pos_;
    std::string w = scan_word();
    pos_ = save;
    return w;
  }
  std::string word() {
    std::string w = scan_word();
    if (w.empty()) throw ParseError("expected a word", pos_);
    return w;
  }
  std::string scan_word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) != 0 || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses without enforcing the alternation or width invariants.
inline RawQbf parse_raw_qbf(std::string_view text, QbfFormat format) {
  return format == QbfFormat::Qdimacs ? detail::parse_qdimacs(text) : detail::TextualQbfParser(text).parse();
}

/// Strict parse: the result satisfies every Qbf invariant or QbfError names
/// the first violation.
inline Qbf parse_qbf(std::string_view text, QbfFormat format) {
  RawQbf raw = parse_raw_qbf(text, format);
  if (auto why = qbf_violation(raw.prefix, raw.clauses)) throw QbfError(*why);
  Qbf q;
  q.prefix = std::move(raw.prefix);
  for (const auto& c : raw.clauses) q.matrix.push_back({c[0], c[1], c[2]});
  return q;
}

/// Textual form accepted by parse_qbf.
inline std::string render_qbf(const Qbf& q) {
  std::string out;
  for (const QuantifiedVar& qv : q.prefix) {
    out += qv.quantifier == Quantifier::Exists ? "exists " : "forall ";
    out += qv.var;
    out += ' ';
  }
  out += ':';
  if (q.matrix.empty()) return out + " true";
  for (std::size_t c = 0; c < q.matrix.size(); ++c) {
    out += c == 0 ? " (" : " & (";
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != 0) out += " | ";
      if (!q.matrix[c][i].positive) out += '-';
      out += q.matrix[c][i].var;
    }
    out += ')';
  }
  return out;
}

/// QDIMACS rendering; variables are numbered in prefix order.
inline std::string render_qdimacs(const Qbf& q) {
  std::map<std::string, std::size_t> id;
  for (const QuantifiedVar& qv : q.prefix) id.emplace(qv.var, id.size() + 1);
  std::string out = "p cnf " + std::to_string(q.prefix.size()) + " " + std::to_string(q.matrix.size()) + "\n";
  for (std::size_t i = 0; i < q.prefix.size();) {
    std::size_t j = i;
    out += q.prefix[i].quantifier == Quantifier::Exists ? "e" : "a";
    for (; j < q.prefix.size() && q.prefix[j].quantifier == q.prefix[i].quantifier; ++j)
      out += " " + std::to_string(id.at(q.prefix[j].var));
    out += " 0\n";
    i = j;
  }
  for (const Clause& c : q.matrix) {
    for (const Literal& l : c) out += (l.positive ? "" : "-") + std::to_string(id.at(l.var)) + " ";
    out += "0\n";
  }
  return out;
}

namespace detail {

struct IndexedMatrix {
  std::vector<std::array<std::pair<std::size_t, bool>, 3>> clauses;

  explicit IndexedMatrix(const Qbf& q) {
    std::map<std::string, std::size_t> index;
    for (const QuantifiedVar& qv : q.prefix) index.emplace(qv.var, index.size());
    for (const Clause& c : q.matrix) {
      std::array<std::pair<std::size_t, bool>, 3> ic;
      for (std::size_t i = 0; i < 3; ++i) ic[i] = {index.at(c[i].var), c[i].positive};
      clauses.push_back(ic);
    }
  }

  bool eval(const std::vector<int>& bits) const {
    for (const auto& c : clauses) {
      bool sat = false;
      for (const auto& [v, positive] : c) sat = sat || ((bits[v] != 0) == positive);
      if (!sat) return false;
    }
    return true;
  }
};

inline bool eval_from(const Qbf& q, const IndexedMatrix& m, std::vector<int>& bits, std::size_t level) {
  if (level == q.prefix.size()) return m.eval(bits);
  bool exists = q.prefix[level].quantifier == Quantifier::Exists;
  for (int b : {0, 1}) {
    bits[level] = b;
    bool sub = eval_from(q, m, bits, level + 1);
    if (sub == exists) return exists;
  }
  return !exists;
}

}  // namespace detail

/// Truth of q, i.e. whether Player E wins the formula game.
inline bool eval_qbf(const Qbf& q) {
  require_valid(q);
  detail::IndexedMatrix m(q);
  std::vector<int> bits(q.prefix.size(), 0);
  return detail::eval_from(q, m, bits, 0);
}

/// Plays the game along `labels` (one bit per quantifier, left to right) and
/// reports whether E wins.
inline bool play_path(const Qbf& q, const std::vector<int>& labels) {
  require_valid(q);
  if (labels.size() != q.prefix.size())
    throw QbfError("path length " + std::to_string(labels.size()) + " differs from prefix length " +
                   std::to_string(q.prefix.size()));
  for (int b : labels)
    if (b != 0 && b != 1) throw QbfError("path labels must be 0 or 1");
  return detail::IndexedMatrix(q).eval(labels);
}

struct StrategyNode {
  int label = 0;
  std::vector<StrategyNode> children;
  bool operator==(const StrategyNode&) const = default;
};

/// Level l (1-based) of the tree corresponds to the l-th quantifier. Odd
/// levels hold E's choices; each odd non-leaf node has two children labelled
/// 0 and 1 for A's options, each with a single child.
struct StrategyTree {
  StrategyNode root;
  bool operator==(const StrategyTree&) const = default;
};

namespace detail {

inline std::optional<StrategyNode> winning_node(const Qbf& q, const IndexedMatrix& m, std::vector<int>& bits,
                                                std::size_t level) {
  for (int b : {0, 1}) {
    bits[level] = b;
    if (level + 1 == q.prefix.size()) {
      if (m.eval(bits)) return StrategyNode{b, {}};
      continue;
    }
    StrategyNode node{b, {}};
    bool ok = true;
    for (int a : {0, 1}) {
      bits[level + 1] = a;
      auto sub = winning_node(q, m, bits, level + 2);
      if (!sub) {
        ok = false;
        break;
      }
      node.children.push_back(StrategyNode{a, {std::move(*sub)}});
    }
    if (ok) return node;
  }
  return std::nullopt;
}

}  // namespace detail

/// A winning strategy tree for E when q is true. E's choices take the
/// smallest winning bit.
inline std::optional<StrategyTree> winning_strategy_tree(const Qbf& q) {
  require_valid(q);
  detail::IndexedMatrix m(q);
  std::vector<int> bits(q.prefix.size(), 0);
  auto root = detail::winning_node(q, m, bits, 0);
  if (!root) return std::nullopt;
  return StrategyTree{std::move(*root)};
}

/// Root-to-leaf label sequences, left to right.
inline std::vector<std::vector<int>> tree_paths(const StrategyTree& t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto walk = [&](const StrategyNode& n, const auto& self) -> void {
    cur.push_back(n.label);
    if (n.children.empty()) out.push_back(cur);
    for (const StrategyNode& c : n.children) self(c, self);
    cur.pop_back();
  };
  walk(t.root, walk);
  return out;
}

/// Labels of the nodes on each level (index 0 = level 1), left to right.
inline std::vector<std::vector<int>> level_labels(const StrategyTree& t) {
  std::vector<std::vector<int>> levels;
  std::vector<const StrategyNode*> frontier{&t.root};
  while (!frontier.empty()) {
    std::vector<int> labels;
    std::vector<const StrategyNode*> next;
    for (const StrategyNode* n : frontier) {
      labels.push_back(n->label);
      for (const StrategyNode& c : n->children) next.push_back(&c);
    }
    levels.push_back(std::move(labels));
    frontier = std::move(next);
  }
  return levels;
}

inline CheckResult check_strategy_tree(const Qbf& q, const StrategyTree& t) {
  CheckResult r;
  if (auto why = qbf_violation(q)) {
    r.fail("invalid QBF: " + *why);
    return r;
  }
  const std::size_t n = q.prefix.size();
  bool shape_ok = true;
  auto walk = [&](const StrategyNode& node, std::size_t level, const std::string& where, const auto& self) -> void {
    if (node.label != 0 && node.label != 1) {
      r.fail("label " + std::to_string(node.label) + " at " + where + " is not a bit");
      shape_ok = false;
    }
    std::size_t want = level == n ? 0 : (level % 2 == 1 ? 2 : 1);
    if (node.children.size() != want) {
      r.fail("node " + where + " on level " + std::to_string(level) + " has " + std::to_string(node.children.size()) +
             " children (expected " + std::to_string(want) + ")");
      shape_ok = false;
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i)
      self(node.children[i], level + 1, where + "/" + std::to_string(i), self);
  };
  walk(t.root, 1, "root", walk);
  if (!shape_ok) return r;

  auto levels = level_labels(t);
  for (std::size_t l = 1; l < levels.size(); l += 2) {
    for (std::size_t i = 0; i < levels[l].size(); ++i)
      if (levels[l][i] != static_cast<int>(i % 2)) {
        r.fail("alternation violated on level " + std::to_string(l + 1) + " at position " + std::to_string(i));
        break;
      }
  }
  if (!r.ok) return r;

  detail::IndexedMatrix m(q);
  for (const auto& path : tree_paths(t))
    if (!m.eval(path)) {
      std::string s;
      for (int b : path) s += (s.empty() ? "" : ",") + std::to_string(b);
      r.fail("losing path " + s);
    }
  return r;
}

inline nlohmann::ordered_json strategy_to_json(const StrategyNode& n) {
  nlohmann::ordered_json j;
  j["label"] = n.label;
  j["children"] = nlohmann::ordered_json::array();
  for (const StrategyNode& c : n.children) j["children"].push_back(strategy_to_json(c));
  return j;
}

inline StrategyNode strategy_node_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("label") || !j.contains("children"))
    throw ParseError("strategy node needs \"label\" and \"children\"", 0);
  const auto& label = j.at("label");
  if (!label.is_number_integer() || (label.get<int>() != 0 && label.get<int>() != 1))
    throw ParseError("strategy label must be 0 or 1", 0);
  if (!j.at("children").is_array()) throw ParseError("strategy children must be an array", 0);
  StrategyNode n{label.get<int>(), {}};
  for (const auto& c : j.at("children")) n.children.push_back(strategy_node_from_json(c));
  return n;
}

inline std::string write_strategy(const StrategyTree& t) { return strategy_to_json(t.root).dump(2) + "\n"; }

inline StrategyTree read_strategy(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return StrategyTree{strategy_node_from_json(j)};
}

}  // namespace cl4

#endif  // CL4_QBF_HPP
