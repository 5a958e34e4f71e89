#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geolog/errors.hpp"

namespace geolog {

inline bool is_reserved_word(const std::string& s) { return s == "top" || s == "bot" || s == "exists"; }

inline bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// "x" followed by a decimal index without leading zero.
inline bool is_var_shaped(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x' || s[1] == '0') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline bool is_const_shaped(const std::string& s) {
  if (s.size() < 2 || s[0] != 'c' || s[1] == '0') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// Constant, function, predicate and proposition names live in disjoint
// namespaces; equality is built in and never declared.
struct Signature {
  std::set<std::string> constants;
  std::map<std::string, int> functions;    // arity >= 1
  std::map<std::string, int> predicates;   // arity >= 1
  std::set<std::string> propositions;      // arity-0 atoms for propositional theories

  void declare_constant(const std::string& name) {
    if (!is_const_shaped(name))
      fail(ErrorKind::BadInput, "constant '" + name + "' must look like c1, c2, ...");
    check_fresh(name);
    constants.insert(name);
  }

  void declare_function(const std::string& name, int arity) {
    if (!is_ident(name) || is_reserved_word(name))
      fail(ErrorKind::BadInput, "bad function name '" + name + "'");
    if (arity < 1) fail(ErrorKind::BadInput, "function '" + name + "' needs arity >= 1");
    check_fresh(name);
    functions.emplace(name, arity);
  }

  void declare_predicate(const std::string& name, int arity) {
    if (!is_ident(name) || is_reserved_word(name) || is_var_shaped(name) || is_const_shaped(name))
      fail(ErrorKind::BadInput, "bad predicate name '" + name + "'");
    if (arity < 1) fail(ErrorKind::BadInput, "predicate '" + name + "' needs arity >= 1");
    check_fresh(name);
    predicates.emplace(name, arity);
  }

  void declare_proposition(const std::string& name) {
    if (!is_ident(name) || is_reserved_word(name) || is_var_shaped(name) || is_const_shaped(name))
      fail(ErrorKind::BadInput, "bad proposition name '" + name + "'");
    check_fresh(name);
    propositions.insert(name);
  }

 private:
  void check_fresh(const std::string& name) const {
    if (constants.count(name) || functions.count(name) || predicates.count(name) || propositions.count(name))
      fail(ErrorKind::BadInput, "symbol '" + name + "' declared twice");
  }
};

enum class TermKind { Const, Var, Fun };

struct Term {
  TermKind kind = TermKind::Var;
  std::string name;        // Const, Fun
  int var = 0;             // Var, 1-based
  std::vector<Term> args;  // Fun

  static Term constant(std::string n) {
    Term t;
    t.kind = TermKind::Const;
    t.name = std::move(n);
    return t;
  }

  static Term variable(int index) {
    if (index < 1) fail(ErrorKind::BadInput, "variable indices are 1-based");
    Term t;
    t.kind = TermKind::Var;
    t.var = index;
    return t;
  }

  static Term fun(std::string n, std::vector<Term> as) {
    if (as.empty()) fail(ErrorKind::BadInput, "function application needs at least one argument");
    Term t;
    t.kind = TermKind::Fun;
    t.name = std::move(n);
    t.args = std::move(as);
    return t;
  }

  bool operator==(const Term&) const = default;
};

enum class FormulaKind { Top, Bot, Pred, Eq, And, Join, Exists };

struct Formula {
  FormulaKind kind = FormulaKind::Top;
  std::string name;           // Pred
  std::vector<Term> terms;    // Pred arguments; Eq has exactly two
  std::vector<Formula> sub;   // And: 2, Join: any count, Exists: 1
  int var = 0;                // Exists

  static Formula top() { return Formula{}; }

  static Formula bot() {
    Formula f;
    f.kind = FormulaKind::Bot;
    return f;
  }

  // Empty argument lists are reserved for propositional atoms.
  static Formula pred(std::string n, std::vector<Term> args) {
    Formula f;
    f.kind = FormulaKind::Pred;
    f.name = std::move(n);
    f.terms = std::move(args);
    return f;
  }

  static Formula proposition(std::string n) { return pred(std::move(n), {}); }

  static Formula eq(Term lhs, Term rhs) {
    Formula f;
    f.kind = FormulaKind::Eq;
    f.terms.push_back(std::move(lhs));
    f.terms.push_back(std::move(rhs));
    return f;
  }

  static Formula conj(Formula lhs, Formula rhs) {
    Formula f;
    f.kind = FormulaKind::And;
    f.sub.push_back(std::move(lhs));
    f.sub.push_back(std::move(rhs));
    return f;
  }

  // Finitary join; the empty list is the same formula as bot semantically
  // but keeps its own shape.
  static Formula join_of(std::vector<Formula> members) {
    Formula f;
    f.kind = FormulaKind::Join;
    f.sub = std::move(members);
    return f;
  }

  static Formula disj(Formula lhs, Formula rhs) {
    std::vector<Formula> m;
    m.push_back(std::move(lhs));
    m.push_back(std::move(rhs));
    return join_of(std::move(m));
  }

  static Formula exists(int variable, Formula body) {
    if (variable < 1) fail(ErrorKind::BadInput, "variable indices are 1-based");
    Formula f;
    f.kind = FormulaKind::Exists;
    f.var = variable;
    f.sub.push_back(std::move(body));
    return f;
  }

  bool operator==(const Formula&) const = default;
};

struct Sequent {
  Formula antecedent;
  Formula consequent;
  bool operator==(const Sequent&) const = default;
};

// ---- printing ----
// The printer emits the canonical concrete syntax; parsing its output gives
// back the identical tree. Two-member joins print with the infix connective.

inline void print_term(std::string& out, const Term& t) {
  switch (t.kind) {
    case TermKind::Const:
      out += t.name;
      return;
    case TermKind::Var:
      out += "x" + std::to_string(t.var);
      return;
    case TermKind::Fun: {
      out += "f." + t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        print_term(out, t.args[i]);
      }
      out += ")";
      return;
    }
  }
}

inline std::string to_text(const Term& t) {
  std::string out;
  print_term(out, t);
  return out;
}

inline void print_formula(std::string& out, const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Top:
      out += "top";
      return;
    case FormulaKind::Bot:
      out += "bot";
      return;
    case FormulaKind::Pred: {
      out += f.name;
      if (!f.terms.empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i) out += ", ";
          print_term(out, f.terms[i]);
        }
        out += ")";
      }
      return;
    }
    case FormulaKind::Eq:
      print_term(out, f.terms[0]);
      out += " = ";
      print_term(out, f.terms[1]);
      return;
    case FormulaKind::And:
      out += "(";
      print_formula(out, f.sub[0]);
      out += " /\\ ";
      print_formula(out, f.sub[1]);
      out += ")";
      return;
    case FormulaKind::Join:
      if (f.sub.size() == 2) {
        out += "(";
        print_formula(out, f.sub[0]);
        out += " \\/ ";
        print_formula(out, f.sub[1]);
        out += ")";
      } else {
        out += "\\/[";
        for (std::size_t i = 0; i < f.sub.size(); ++i) {
          if (i) out += ", ";
          print_formula(out, f.sub[i]);
        }
        out += "]";
      }
      return;
    case FormulaKind::Exists:
      out += "exists x" + std::to_string(f.var) + " . ";
      print_formula(out, f.sub[0]);
      return;
  }
}

inline std::string to_text(const Formula& f) {
  std::string out;
  print_formula(out, f);
  return out;
}

inline std::string to_text(const Sequent& s) { return to_text(s.antecedent) + " |- " + to_text(s.consequent); }

// ---- variables ----

inline void collect_term_vars(const Term& t, std::set<int>& out) {
  switch (t.kind) {
    case TermKind::Const:
      return;
    case TermKind::Var:
      out.insert(t.var);
      return;
    case TermKind::Fun:
      for (const Term& a : t.args) collect_term_vars(a, out);
      return;
  }
}

inline std::set<int> term_vars(const Term& t) {
  std::set<int> out;
  collect_term_vars(t, out);
  return out;
}

inline std::set<int> free_vars(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return {};
    case FormulaKind::Pred:
    case FormulaKind::Eq: {
      std::set<int> out;
      for (const Term& t : f.terms) collect_term_vars(t, out);
      return out;
    }
    case FormulaKind::And:
    case FormulaKind::Join: {
      std::set<int> out;
      for (const Formula& g : f.sub) {
        auto s = free_vars(g);
        out.insert(s.begin(), s.end());
      }
      return out;
    }
    case FormulaKind::Exists: {
      auto out = free_vars(f.sub[0]);
      out.erase(f.var);
      return out;
    }
  }
  return {};
}

inline std::set<int> free_vars(const Sequent& s) {
  auto out = free_vars(s.antecedent);
  auto c = free_vars(s.consequent);
  out.insert(c.begin(), c.end());
  return out;
}

// ---- substitution ----

inline Term subst_term(const Term& t, const Term& replacement, int var) {
  switch (t.kind) {
    case TermKind::Const:
      return t;
    case TermKind::Var:
      return t.var == var ? replacement : t;
    case TermKind::Fun: {
      Term out = t;
      for (Term& a : out.args) a = subst_term(a, replacement, var);
      return out;
    }
  }
  return t;
}

// Substitutes `replacement` for free occurrences of the variable. A binder
// that would capture a variable of the replacement term is a hard error;
// nothing is renamed silently.
inline Formula subst_formula(const Formula& f, const Term& replacement, int var) {
  switch (f.kind) {
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return f;
    case FormulaKind::Pred:
    case FormulaKind::Eq: {
      Formula out = f;
      for (Term& t : out.terms) t = subst_term(t, replacement, var);
      return out;
    }
    case FormulaKind::And:
    case FormulaKind::Join: {
      Formula out = f;
      for (Formula& g : out.sub) g = subst_formula(g, replacement, var);
      return out;
    }
    case FormulaKind::Exists: {
      if (f.var == var) return f;  // occurrences below are bound, not free
      if (!free_vars(f.sub[0]).count(var)) return f;
      if (term_vars(replacement).count(f.var))
        fail(ErrorKind::Capture, "substituting " + to_text(replacement) + " for x" + std::to_string(var) +
                                     " under exists x" + std::to_string(f.var) + " would capture x" +
                                     std::to_string(f.var));
      Formula out = f;
      out.sub[0] = subst_formula(f.sub[0], replacement, var);
      return out;
    }
  }
  return f;
}

namespace detail {

inline Term sim_subst_term(const Term& t, const std::map<int, int>& repl) {
  switch (t.kind) {
    case TermKind::Const:
      return t;
    case TermKind::Var: {
      auto it = repl.find(t.var);
      return it == repl.end() ? t : Term::variable(it->second);
    }
    case TermKind::Fun: {
      Term out = t;
      for (Term& a : out.args) a = sim_subst_term(a, repl);
      return out;
    }
  }
  return t;
}

inline Formula sim_subst(const Formula& f, std::map<int, int> repl) {
  if (repl.empty()) return f;
  switch (f.kind) {
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return f;
    case FormulaKind::Pred:
    case FormulaKind::Eq: {
      Formula out = f;
      for (Term& t : out.terms) t = sim_subst_term(t, repl);
      return out;
    }
    case FormulaKind::And:
    case FormulaKind::Join: {
      Formula out = f;
      for (Formula& g : out.sub) g = sim_subst(g, repl);
      return out;
    }
    case FormulaKind::Exists: {
      repl.erase(f.var);  // the binder shadows its own variable
      if (repl.empty()) return f;
      auto fv = free_vars(f.sub[0]);
      for (const auto& [target, rep] : repl)
        if (fv.count(target) && rep == f.var)
          fail(ErrorKind::Capture, "replacing x" + std::to_string(target) + " by x" + std::to_string(rep) +
                                       " under exists x" + std::to_string(f.var) + " would capture it");
      Formula out = f;
      out.sub[0] = sim_subst(f.sub[0], std::move(repl));
      return out;
    }
  }
  return f;
}

}  // namespace detail

// All pairs are applied at once: replacements are never themselves rewritten,
// so swapping two variables works without an intermediate name.
inline Formula simultaneous_subst(const Formula& f, const std::vector<std::pair<int, int>>& pairs) {
  std::map<int, int> repl;
  for (const auto& [target, rep] : pairs) {
    if (target < 1 || rep < 1) fail(ErrorKind::BadInput, "variable indices are 1-based");
    if (!repl.emplace(target, rep).second)
      fail(ErrorKind::DuplicateTarget, "variable x" + std::to_string(target) + " listed as a target twice");
  }
  return detail::sim_subst(f, std::move(repl));
}

}  // namespace geolog
