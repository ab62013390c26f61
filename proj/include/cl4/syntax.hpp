#ifndef CL4_SYNTAX_HPP
#define CL4_SYNTAX_HPP

// Concrete syntax for formulas.
//
//   formula := quant | disj
//   quant   := ("call" | "cex") VAR ":" formula        (also ⊓x / ⊔x, colon optional)
//   disj    := conj { "\/" conj }  |  conj { "cor" conj }
//   conj    := unit { "/\" unit }  |  unit { "cand" unit }
//   unit    := "T" | "F" | ["~"] atom | "(" formula ")" | quant
//   atom    := LETTER [ "(" term { "," term } ")" ]
//   term    := VAR | NAT
//
// A quantifier body extends as far right as possible. UTF-8 aliases
// ⊓ ⊔ ∧ ∨ ¬ ⊤ ⊥ are accepted on input; output is always ASCII.

#include <cctype>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cl4/error.hpp"
#include "cl4/formula.hpp"

namespace cl4 {

namespace detail {

enum class Tok { LParen, RParen, Comma, Colon, Not, ParOr, ParAnd, ChoOr, ChoAnd, Call, Cex, Top, Bot, Ident, Nat, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
  static const std::pair<std::string_view, Tok> symbols[] = {
      {"\\/", Tok::ParOr},  {"/\\", Tok::ParAnd}, {"∨", Tok::ParOr}, {"∧", Tok::ParAnd},
      {"⊔", Tok::ChoOr}, {"⊓", Tok::ChoAnd}, {"¬", Tok::Not}, {"⊤", Tok::Top},
      {"⊥", Tok::Bot},  {"~", Tok::Not},       {"(", Tok::LParen},    {")", Tok::RParen},
      {",", Tok::Comma},     {":", Tok::Colon},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c) != 0) {
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& [sym, kind] : symbols) {
      if (s.substr(i, sym.size()) == sym) {
        out.push_back({kind, std::string(sym), i});
        i += sym.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::isdigit(c) != 0) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) != 0) ++j;
      out.push_back({Tok::Nat, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isalpha(c) != 0) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) != 0 || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "call") kind = Tok::Call;
      else if (word == "cex") kind = Tok::Cex;
      else if (word == "cor") kind = Tok::ChoOr;
      else if (word == "cand") kind = Tok::ChoAnd;
      out.push_back({kind, std::move(word), i});
      i = j;
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", i);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    check_variables();
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(cur_ + ahead, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[cur_ < tokens_.size() - 1 ? cur_++ : cur_]; }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().pos);
    return next();
  }

  Formula formula() { return chain(Tok::ParOr, Tok::ChoOr, Kind::ParOr, Kind::ChoOr, &FormulaParser::conj); }
  Formula conj() { return chain(Tok::ParAnd, Tok::ChoAnd, Kind::ParAnd, Kind::ChoAnd, &FormulaParser::unit); }

  // One precedence level: a flat chain of a single operator.
  Formula chain(Tok par, Tok cho, Kind par_kind, Kind cho_kind, Formula (FormulaParser::*operand)()) {
    std::vector<Formula> ops;
    ops.push_back((this->*operand)());
    std::optional<Tok> op;
    while (peek().kind == par || peek().kind == cho) {
      if (op && *op != peek().kind)
        throw ParseError("mixing parallel and choice operators requires parentheses", peek().pos);
      op = next().kind;
      ops.push_back((this->*operand)());
    }
    if (!op) return ops.front();
    return Formula::connective(*op == par ? par_kind : cho_kind, std::move(ops));
  }

  bool at_quantifier() const {
    Tok k = peek().kind;
    if (k == Tok::Call || k == Tok::Cex) return true;
    bool symbol = peek().text == "⊓" || peek().text == "⊔";
    return symbol && peek(1).kind == Tok::Ident;
  }

  Formula unit() {
    if (at_quantifier()) {
      Tok k = next().kind;
      const Token& v = expect(Tok::Ident, "a variable after quantifier");
      if (!is_variable_name(v.text)) throw ParseError("'" + v.text + "' is not a variable", v.pos);
      if (!binders_.insert(v.text).second)
        throw ParseError("variable '" + v.text + "' is already bound by another quantifier", v.pos);
      if (peek().kind == Tok::Colon) next();
      scope_.push_back(v.text);
      Formula body = formula();
      scope_.pop_back();
      return Formula::quantifier(k == Tok::Call || k == Tok::ChoAnd ? Kind::ChoAll : Kind::ChoEx, v.text,
                                 std::move(body));
    }
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Top: next(); return Formula::top();
      case Tok::Bot: next(); return Formula::bot();
      case Tok::Not: {
        next();
        if (peek().kind != Tok::Ident || is_logical_constant())
          throw ParseError("negation applies only to non-logical atoms", peek().pos);
        return atom(true);
      }
      case Tok::Ident:
        if (is_logical_constant()) {
          next();
          return t.text == "T" ? Formula::top() : Formula::bot();
        }
        return atom(false);
      default:
        throw ParseError("expected a formula", t.pos);
    }
  }

  bool is_logical_constant() const {
    return (peek().text == "T" || peek().text == "F") && peek().kind == Tok::Ident && peek(1).kind != Tok::LParen;
  }

  Formula atom(bool negated) {
    const Token& name = next();
    if (!is_letter_name(name.text)) throw ParseError("'" + name.text + "' is not a letter name", name.pos);
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) {
      next();
      do {
        args.push_back(term());
      } while (peek().kind == Tok::Comma && (next(), true));
      expect(Tok::RParen, "')' after arguments");
    }
    LetterId letter = make_letter(name.text, args.size());
    auto [it, fresh] = arity_.emplace(name.text, args.size());
    if (!fresh && it->second != args.size())
      throw ParseError("letter '" + name.text + "' used with arities " + std::to_string(it->second) + " and " +
                           std::to_string(args.size()),
                       name.pos);
    return Formula::atom(std::move(letter), std::move(args), negated);
  }

  Term term() {
    const Token& t = next();
    if (t.kind == Tok::Nat) {
      try {
        return Term::constant(std::stoull(t.text));
      } catch (const std::out_of_range&) {
        throw ParseError("constant out of range", t.pos);
      }
    }
    if (t.kind == Tok::Ident && is_variable_name(t.text)) {
      bool bound = std::find(scope_.begin(), scope_.end(), t.text) != scope_.end();
      if (!bound) free_uses_.emplace(t.text, t.pos);
      return Term::variable(t.text);
    }
    throw ParseError("expected a variable or a natural number", t.pos);
  }

  void check_variables() const {
    for (const auto& [name, pos] : free_uses_)
      if (binders_.contains(name))
        throw ParseError("variable '" + name + "' has both free and bound occurrences", pos);
  }

  std::vector<Token> tokens_;
  std::size_t cur_ = 0;
  std::vector<std::string> scope_;
  std::set<std::string> binders_;
  std::map<std::string, std::size_t> free_uses_;
  std::map<std::string, std::size_t> arity_;
};

inline void render_into(const Formula& f, std::string& out);

inline void render_operand(const Formula& f, std::string& out) {
  bool compound = is_connective(f.kind()) || is_quantifier(f.kind());
  if (compound) out += '(';
  render_into(f, out);
  if (compound) out += ')';
}

inline void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Top: out += 'T'; return;
    case Kind::Bot: out += 'F'; return;
    case Kind::Atom:
      if (f.negated()) out += '~';
      out += f.letter().name;
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i != 0) out += ',';
          out += f.args()[i].to_string();
        }
        out += ')';
      }
      return;
    case Kind::ParAnd:
    case Kind::ParOr:
    case Kind::ChoAnd:
    case Kind::ChoOr: {
      const char* sep = f.is(Kind::ParAnd) ? " /\\ " : f.is(Kind::ParOr) ? " \\/ " : f.is(Kind::ChoAnd) ? " cand " : " cor ";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i != 0) out += sep;
        render_operand(f.child(i), out);
      }
      return;
    }
    case Kind::ChoAll:
    case Kind::ChoEx:
      out += f.is(Kind::ChoAll) ? "call " : "cex ";
      out += f.var();
      out += ": ";
      if (is_connective(f.body().kind())) render_operand(f.body(), out);
      else render_into(f.body(), out);
      return;
  }
}

}  // namespace detail

/// Parses a formula and checks every formula invariant.
inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

/// Canonical ASCII rendering; parse_formula(render_formula(f)) == f.
inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

}  // namespace cl4

#endif  // CL4_SYNTAX_HPP
