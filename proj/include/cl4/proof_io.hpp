#ifndef CL4_PROOF_IO_HPP
#define CL4_PROOF_IO_HPP

// Proof artifact: a JSON tree. Each node carries, in this key order,
// "formula" (canonical rendering), "rule", the rule's fields, and "premises".
//
//   wait             -
//   choose-disjunct  "path", "index"
//   choose-term      "path", "term"
//   match            "posPath", "negPath", "fresh"

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cl4/error.hpp"
#include "cl4/prover.hpp"
#include "cl4/syntax.hpp"

namespace cl4 {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json path_to_json(const Path& p) {
  ordered_json a = ordered_json::array();
  for (std::size_t i : p.steps) a.push_back(i);
  return a;
}

inline Path path_from_json(const ordered_json& j) {
  if (!j.is_array()) throw ParseError("path must be an array", 0);
  Path p;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw ParseError("path entries must be natural numbers", 0);
    p.steps.push_back(x.get<std::size_t>());
  }
  return p;
}

inline Term term_from_string(const std::string& s) {
  if (is_variable_name(s)) return Term::variable(s);
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; }))
    return Term::constant(std::stoull(s));
  throw ParseError("bad term '" + s + "'", 0);
}

inline const ordered_json& field(const ordered_json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("proof node lacks \"") + key + "\"", 0);
  return j.at(key);
}

}  // namespace detail

inline ordered_json proof_to_json(const ProofNode& n) {
  ordered_json j;
  j["formula"] = render_formula(n.conclusion);
  j["rule"] = rule_name(n.rule);
  std::visit(
      [&j](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ChooseDisjunct>) {
          j["path"] = detail::path_to_json(r.path);
          j["index"] = r.index;
        } else if constexpr (std::is_same_v<R, ChooseTerm>) {
          j["path"] = detail::path_to_json(r.path);
          j["term"] = r.term.to_string();
        } else if constexpr (std::is_same_v<R, MatchPair>) {
          j["posPath"] = detail::path_to_json(r.pos_path);
          j["negPath"] = detail::path_to_json(r.neg_path);
          j["fresh"] = r.fresh.name;
        }
      },
      n.rule);
  j["premises"] = ordered_json::array();
  for (const ProofNode& p : n.premises) j["premises"].push_back(proof_to_json(p));
  return j;
}

inline ProofNode proof_from_json(const ordered_json& j) {
  ProofNode n;
  n.conclusion = parse_formula(detail::field(j, "formula").get<std::string>());
  const std::string rule = detail::field(j, "rule").get<std::string>();
  if (rule == "wait") {
    n.rule = Wait{};
  } else if (rule == "choose-disjunct") {
    n.rule = ChooseDisjunct{detail::path_from_json(detail::field(j, "path")), detail::field(j, "index").get<std::size_t>()};
  } else if (rule == "choose-term") {
    n.rule = ChooseTerm{detail::path_from_json(detail::field(j, "path")),
                        detail::term_from_string(detail::field(j, "term").get<std::string>())};
  } else if (rule == "match") {
    MatchPair m{detail::path_from_json(detail::field(j, "posPath")), detail::path_from_json(detail::field(j, "negPath")), {}};
    // The replacement letter inherits the arity of the matched letter.
    auto target = subformula_at(n.conclusion, m.pos_path);
    std::size_t arity = target && target->is(Kind::Atom) ? target->letter().arity : 0;
    m.fresh = LetterId{Sort::Elementary, detail::field(j, "fresh").get<std::string>(), arity};
    if (!is_letter_name(m.fresh.name) || std::isupper(static_cast<unsigned char>(m.fresh.name.front())) != 0)
      m.fresh.sort = Sort::General;  // rejected later by the checker
    n.rule = m;
  } else {
    throw ParseError("unknown rule \"" + rule + "\"", 0);
  }
  for (const auto& p : detail::field(j, "premises")) n.premises.push_back(proof_from_json(p));
  return n;
}

/// Serialized artifact: two-space indented UTF-8 JSON followed by a newline.
inline std::string write_proof(const ProofNode& n) { return proof_to_json(n).dump(2) + "\n"; }

inline ProofNode read_proof(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  try {
    return proof_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed proof: ") + e.what(), 0);
  }
}

}  // namespace cl4

#endif  // CL4_PROOF_IO_HPP
