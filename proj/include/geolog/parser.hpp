#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "geolog/syntax.hpp"

namespace geolog {
namespace detail {

enum class Tok {
  LParen, RParen, JoinOpen, RBracket, Comma, AndOp, OrOp, Turnstile, EqSign, Dot,
  KwTop, KwBot, KwExists, Var, ConstName, FunName, Ident, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int var = 0;
  std::size_t pos = 0;  // 1-based offset into the input
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline int parse_index(const std::string& digits, std::size_t pos) {
  if (digits.size() > 6) fail(ErrorKind::Syntax, "index too large at offset " + std::to_string(pos));
  return std::stoi(digits);
}

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, std::size_t pos, int var = 0) {
    out.push_back(Token{k, std::move(text), var, pos + 1});
  };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t at = i;
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    switch (c) {
      case '(': push(Tok::LParen, "(", at); ++i; continue;
      case ')': push(Tok::RParen, ")", at); ++i; continue;
      case ',': push(Tok::Comma, ",", at); ++i; continue;
      case ']': push(Tok::RBracket, "]", at); ++i; continue;
      case '.': push(Tok::Dot, ".", at); ++i; continue;
      case '=': push(Tok::EqSign, "=", at); ++i; continue;
      default: break;
    }
    if (c == '/') {
      if (i + 1 < s.size() && s[i + 1] == '\\') { push(Tok::AndOp, "/\\", at); i += 2; continue; }
      fail(ErrorKind::Syntax, "unexpected '/' at offset " + std::to_string(at + 1));
    }
    if (c == '\\') {
      if (i + 1 < s.size() && s[i + 1] == '/') {
        if (i + 2 < s.size() && s[i + 2] == '[') { push(Tok::JoinOpen, "\\/[", at); i += 3; continue; }
        push(Tok::OrOp, "\\/", at);
        i += 2;
        continue;
      }
      fail(ErrorKind::Syntax, "unexpected '\\' at offset " + std::to_string(at + 1));
    }
    if (c == '|') {
      if (i + 1 < s.size() && s[i + 1] == '-') { push(Tok::Turnstile, "|-", at); i += 2; continue; }
      fail(ErrorKind::Syntax, "unexpected '|' at offset " + std::to_string(at + 1));
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      // "f" immediately followed by ".name" is a function symbol.
      if (word == "f" && j + 1 < s.size() && s[j] == '.' && ident_start(s[j + 1])) {
        std::size_t k = j + 2;
        while (k < s.size() && ident_char(s[k])) ++k;
        push(Tok::FunName, std::string(s.substr(j + 1, k - j - 1)), at);
        i = k;
        continue;
      }
      i = j;
      if (word == "top") { push(Tok::KwTop, word, at); continue; }
      if (word == "bot") { push(Tok::KwBot, word, at); continue; }
      if (word == "exists") { push(Tok::KwExists, word, at); continue; }
      if (is_var_shaped(word)) { push(Tok::Var, word, at, parse_index(word.substr(1), at + 1)); continue; }
      if (is_const_shaped(word)) { push(Tok::ConstName, word, at); continue; }
      push(Tok::Ident, word, at);
      continue;
    }
    fail(ErrorKind::Syntax, std::string("unexpected character '") + c + "' at offset " + std::to_string(at + 1));
  }
  push(Tok::End, "", s.size());
  return out;
}

// Recursive descent over the token list. In inferring mode, symbols are
// declared at their first use with the observed arity; later uses must agree.
class Parser {
 public:
  Parser(std::string_view text, const Signature& sig)
      : toks_(lex(text)), sig_(&sig), mut_sig_(nullptr) {}

  Parser(std::string_view text, Signature& sig, bool infer)
      : toks_(lex(text)), sig_(&sig), mut_sig_(infer ? &sig : nullptr) {}

  Term parse_term_all() {
    Term t = term();
    expect_end();
    return t;
  }

  Formula parse_formula_all() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Sequent parse_sequent_all() {
    Formula lhs = formula();
    take(Tok::Turnstile, "'|-'");
    Formula rhs = formula();
    expect_end();
    return Sequent{std::move(lhs), std::move(rhs)};
  }

 private:
  const Token& peek() const { return toks_[at_]; }

  Token take() { return toks_[at_++]; }

  Token take(Tok kind, const std::string& what) {
    if (peek().kind != kind) unexpected(what);
    return take();
  }

  void expect_end() {
    if (peek().kind != Tok::End) unexpected("end of input");
  }

  [[noreturn]] void unexpected(const std::string& what) {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    fail(ErrorKind::Syntax, "expected " + what + " at offset " + std::to_string(t.pos) + ", found " + found);
  }

  std::vector<Term> argument_list() {
    take(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(term());
    while (peek().kind == Tok::Comma) {
      take();
      args.push_back(term());
    }
    take(Tok::RParen, "')'");
    return args;
  }

  Term term() {
    switch (peek().kind) {
      case Tok::Var: {
        Token t = take();
        return Term::variable(t.var);
      }
      case Tok::ConstName: {
        Token t = take();
        if (!sig_->constants.count(t.text)) {
          if (!mut_sig_)
            fail(ErrorKind::UnknownSymbol, "undeclared constant '" + t.text + "' at offset " + std::to_string(t.pos));
          mut_sig_->declare_constant(t.text);
        }
        return Term::constant(t.text);
      }
      case Tok::FunName: {
        Token t = take();
        std::vector<Term> args = argument_list();
        auto it = sig_->functions.find(t.text);
        if (it == sig_->functions.end()) {
          if (!mut_sig_)
            fail(ErrorKind::UnknownSymbol, "undeclared function 'f." + t.text + "' at offset " + std::to_string(t.pos));
          mut_sig_->declare_function(t.text, static_cast<int>(args.size()));
        } else if (it->second != static_cast<int>(args.size())) {
          fail(ErrorKind::ArityMismatch, "function 'f." + t.text + "' expects " + std::to_string(it->second) +
                                             " arguments, got " + std::to_string(args.size()));
        }
        return Term::fun(t.text, std::move(args));
      }
      default:
        unexpected("a term");
    }
  }

  Formula atom_or_eq() {
    // Anything that opens a term here must belong to an equality atom.
    Term lhs = term();
    take(Tok::EqSign, "'='");
    Term rhs = term();
    return Formula::eq(std::move(lhs), std::move(rhs));
  }

  Formula formula() {
    switch (peek().kind) {
      case Tok::LParen: {
        take();
        Formula lhs = formula();
        const Token& op = peek();
        if (op.kind != Tok::AndOp && op.kind != Tok::OrOp) unexpected("'/\\' or '\\/'");
        take();
        Formula rhs = formula();
        take(Tok::RParen, "')'");
        return op.kind == Tok::AndOp ? Formula::conj(std::move(lhs), std::move(rhs))
                                     : Formula::disj(std::move(lhs), std::move(rhs));
      }
      case Tok::JoinOpen: {
        take();
        std::vector<Formula> members;
        if (peek().kind != Tok::RBracket) {
          members.push_back(formula());
          while (peek().kind == Tok::Comma) {
            take();
            members.push_back(formula());
          }
        }
        take(Tok::RBracket, "']'");
        return Formula::join_of(std::move(members));
      }
      case Tok::KwExists: {
        take();
        Token v = take(Tok::Var, "a variable");
        take(Tok::Dot, "'.'");
        return Formula::exists(v.var, formula());  // body extends maximally right
      }
      case Tok::KwTop:
        take();
        return Formula::top();
      case Tok::KwBot:
        take();
        return Formula::bot();
      case Tok::Ident: {
        Token t = take();
        if (peek().kind == Tok::LParen) {
          std::vector<Term> args = argument_list();
          auto it = sig_->predicates.find(t.text);
          if (it == sig_->predicates.end()) {
            if (sig_->propositions.count(t.text))
              fail(ErrorKind::ArityMismatch, "proposition '" + t.text + "' takes no arguments");
            if (!mut_sig_)
              fail(ErrorKind::UnknownSymbol,
                   "undeclared predicate '" + t.text + "' at offset " + std::to_string(t.pos));
            mut_sig_->declare_predicate(t.text, static_cast<int>(args.size()));
          } else if (it->second != static_cast<int>(args.size())) {
            fail(ErrorKind::ArityMismatch, "predicate '" + t.text + "' expects " + std::to_string(it->second) +
                                               " arguments, got " + std::to_string(args.size()));
          }
          return Formula::pred(t.text, std::move(args));
        }
        if (sig_->propositions.count(t.text)) return Formula::proposition(t.text);
        if (sig_->predicates.count(t.text))
          fail(ErrorKind::ArityMismatch, "predicate '" + t.text + "' expects " +
                                             std::to_string(sig_->predicates.at(t.text)) + " arguments, got 0");
        if (!mut_sig_)
          fail(ErrorKind::UnknownSymbol, "undeclared atom '" + t.text + "' at offset " + std::to_string(t.pos));
        mut_sig_->declare_proposition(t.text);
        return Formula::proposition(t.text);
      }
      case Tok::Var:
      case Tok::ConstName:
      case Tok::FunName:
        return atom_or_eq();
      default:
        unexpected("a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const Signature* sig_;
  Signature* mut_sig_;
};

}  // namespace detail

inline Term parse_term(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_term_all();
}

inline Formula parse_formula(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_formula_all();
}

inline Sequent parse_sequent(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_sequent_all();
}

inline Formula parse_formula_inferring(std::string_view text, Signature& sig) {
  return detail::Parser(text, sig, true).parse_formula_all();
}

inline Sequent parse_sequent_inferring(std::string_view text, Signature& sig) {
  return detail::Parser(text, sig, true).parse_sequent_all();
}

}  // namespace geolog
