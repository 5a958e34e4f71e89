#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geolog/frame.hpp"
#include "geolog/parser.hpp"
#include "geolog/syntax.hpp"

namespace geolog {

// Dense lookup tables indexed by argument tuple, first argument most
// significant. Tables are total by construction.
struct FunctionTable {
  int arity = 1;
  std::vector<int> values;  // domain indices, size |D|^arity
};

struct PredicateTable {
  int arity = 1;
  std::vector<Elem> values;  // frame elements, size |D|^arity
};

inline std::size_t tuple_index(int domain_size, const std::vector<int>& tuple) {
  std::size_t idx = 0;
  for (int d : tuple) idx = idx * static_cast<std::size_t>(domain_size) + static_cast<std::size_t>(d);
  return idx;
}

struct Interpretation {
  FiniteFrame frame;
  std::vector<std::string> domain;
  Signature signature;
  std::map<std::string, int> constants;            // name -> domain index
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, PredicateTable> predicates;

  int domain_size() const { return static_cast<int>(domain.size()); }

  int domain_index(const std::string& id) const {
    for (int i = 0; i < domain_size(); ++i)
      if (domain[static_cast<std::size_t>(i)] == id) return i;
    fail(ErrorKind::UnknownDomainElement, "no domain element '" + id + "'");
  }
};

inline std::size_t power(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

inline void validate_interpretation(const Interpretation& I) {
  if (I.domain.empty()) fail(ErrorKind::BadInput, "the domain must be nonempty");
  std::set<std::string> seen;
  for (const auto& d : I.domain)
    if (!seen.insert(d).second) fail(ErrorKind::BadInput, "duplicate domain element '" + d + "'");
  const int D = I.domain_size();
  for (const auto& [name, idx] : I.constants) {
    if (!I.signature.constants.count(name)) fail(ErrorKind::BadInput, "constant '" + name + "' not declared");
    if (idx < 0 || idx >= D) fail(ErrorKind::UnknownDomainElement, "constant '" + name + "' has no value");
  }
  for (const auto& name : I.signature.constants)
    if (!I.constants.count(name)) fail(ErrorKind::BadInput, "constant '" + name + "' has no table entry");
  for (const auto& [name, table] : I.functions) {
    auto it = I.signature.functions.find(name);
    if (it == I.signature.functions.end()) fail(ErrorKind::BadInput, "function '" + name + "' not declared");
    if (it->second != table.arity) fail(ErrorKind::ArityMismatch, "function '" + name + "' arity mismatch");
    if (table.values.size() != power(D, table.arity))
      fail(ErrorKind::BadInput, "function '" + name + "' table is not total");
    for (int v : table.values)
      if (v < 0 || v >= D) fail(ErrorKind::UnknownDomainElement, "function '" + name + "' maps outside the domain");
  }
  for (const auto& [name, arity] : I.signature.functions) {
    (void)arity;
    if (!I.functions.count(name)) fail(ErrorKind::BadInput, "function '" + name + "' has no table");
  }
  for (const auto& [name, table] : I.predicates) {
    auto it = I.signature.predicates.find(name);
    if (it == I.signature.predicates.end()) {
      // Arity-0 atoms live in the proposition namespace.
      if (!I.signature.propositions.count(name)) fail(ErrorKind::BadInput, "predicate '" + name + "' not declared");
      if (table.arity != 0) fail(ErrorKind::ArityMismatch, "proposition '" + name + "' must have arity 0");
    } else if (it->second != table.arity) {
      fail(ErrorKind::ArityMismatch, "predicate '" + name + "' arity mismatch");
    }
    if (table.values.size() != power(D, table.arity))
      fail(ErrorKind::BadInput, "predicate '" + name + "' table is not total");
    for (Elem v : table.values)
      if (v < 0 || v >= I.frame.size())
        fail(ErrorKind::UnknownElement, "predicate '" + name + "' grades outside the frame");
  }
  for (const auto& [name, arity] : I.signature.predicates) {
    (void)arity;
    if (!I.predicates.count(name)) fail(ErrorKind::BadInput, "predicate '" + name + "' has no table");
  }
  for (const auto& name : I.signature.propositions)
    if (!I.predicates.count(name)) fail(ErrorKind::BadInput, "proposition '" + name + "' has no table");
}

// Convenience builder taking ids instead of indices. Tables are dense vectors
// in tuple order (first argument most significant).
inline Interpretation make_interpretation(
    FiniteFrame frame, std::vector<std::string> domain,
    const std::map<std::string, std::string>& constants,
    const std::map<std::string, std::pair<int, std::vector<std::string>>>& functions,
    const std::map<std::string, std::pair<int, std::vector<std::string>>>& predicates) {
  Interpretation I;
  I.frame = std::move(frame);
  I.domain = std::move(domain);
  for (const auto& [name, value] : constants) {
    I.signature.declare_constant(name);
    I.constants.emplace(name, I.domain_index(value));
  }
  for (const auto& [name, spec] : functions) {
    I.signature.declare_function(name, spec.first);
    FunctionTable t;
    t.arity = spec.first;
    for (const auto& v : spec.second) t.values.push_back(I.domain_index(v));
    I.functions.emplace(name, std::move(t));
  }
  for (const auto& [name, spec] : predicates) {
    I.signature.declare_predicate(name, spec.first);
    PredicateTable t;
    t.arity = spec.first;
    for (const auto& v : spec.second) t.values.push_back(I.frame.index_of(v));
    I.predicates.emplace(name, std::move(t));
  }
  validate_interpretation(I);
  return I;
}

// A total variable assignment: a default domain element plus finitely many
// overrides. Updates are functional.
struct Assignment {
  int default_index = 0;
  std::map<int, int> overrides;  // variable index -> domain index

  int at(int var) const {
    auto it = overrides.find(var);
    return it == overrides.end() ? default_index : it->second;
  }

  Assignment with(int var, int d) const {
    Assignment out = *this;
    out.overrides[var] = d;
    return out;
  }

  bool operator==(const Assignment&) const = default;
};

inline Assignment assign_update(const Interpretation& I, const Assignment& s, const std::string& d, int var) {
  if (var < 1) fail(ErrorKind::BadInput, "variable indices are 1-based");
  return s.with(var, I.domain_index(d));
}

inline std::string assignment_text(const Interpretation& I, const Assignment& s) {
  std::string out = "default=" + I.domain[static_cast<std::size_t>(s.default_index)];
  for (const auto& [var, d] : s.overrides)
    out += ",x" + std::to_string(var) + "=" + I.domain[static_cast<std::size_t>(d)];
  return out;
}

inline Assignment parse_assignment(const Interpretation& I, std::string_view text) {
  Assignment s;
  bool saw_default = false;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    std::string_view part = text.substr(i, j - i);
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) fail(ErrorKind::Syntax, "assignment entries look like x1=a");
    std::string key(part.substr(0, eq));
    std::string value(part.substr(eq + 1));
    if (key == "default") {
      s.default_index = I.domain_index(value);
      saw_default = true;
    } else if (is_var_shaped(key)) {
      s.overrides[std::stoi(key.substr(1))] = I.domain_index(value);
    } else {
      fail(ErrorKind::Syntax, "bad assignment key '" + key + "'");
    }
    i = j + 1;
    if (j == text.size()) break;
  }
  if (!saw_default) fail(ErrorKind::Syntax, "an assignment needs a default= entry");
  return s;
}

inline int eval_term(const Interpretation& I, const Assignment& s, const Term& t) {
  switch (t.kind) {
    case TermKind::Const: {
      auto it = I.constants.find(t.name);
      if (it == I.constants.end()) fail(ErrorKind::UnknownSymbol, "undeclared constant '" + t.name + "'");
      return it->second;
    }
    case TermKind::Var: {
      int d = s.at(t.var);
      if (d < 0 || d >= I.domain_size())
        fail(ErrorKind::UnknownDomainElement, "assignment maps x" + std::to_string(t.var) + " outside the domain");
      return d;
    }
    case TermKind::Fun: {
      auto it = I.functions.find(t.name);
      if (it == I.functions.end()) fail(ErrorKind::UnknownSymbol, "undeclared function 'f." + t.name + "'");
      std::vector<int> tuple;
      tuple.reserve(t.args.size());
      for (const Term& a : t.args) tuple.push_back(eval_term(I, s, a));
      return it->second.values[tuple_index(I.domain_size(), tuple)];
    }
  }
  fail(ErrorKind::BadInput, "malformed term");
}

// The grade of a formula at an assignment. Equality is crisp; conjunction is
// meet, finitary join is join over the members, the quantifier is join over
// the domain.
inline Elem eval(const Interpretation& I, const Assignment& s, const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Top:
      return I.frame.top();
    case FormulaKind::Bot:
      return I.frame.bot();
    case FormulaKind::Pred: {
      auto it = I.predicates.find(f.name);
      if (it == I.predicates.end()) fail(ErrorKind::UnknownSymbol, "undeclared predicate '" + f.name + "'");
      if (static_cast<int>(f.terms.size()) != it->second.arity)
        fail(ErrorKind::ArityMismatch, "predicate '" + f.name + "' used at the wrong arity");
      std::vector<int> tuple;
      tuple.reserve(f.terms.size());
      for (const Term& t : f.terms) tuple.push_back(eval_term(I, s, t));
      return it->second.values[tuple_index(I.domain_size(), tuple)];
    }
    case FormulaKind::Eq:
      return eval_term(I, s, f.terms[0]) == eval_term(I, s, f.terms[1]) ? I.frame.top() : I.frame.bot();
    case FormulaKind::And:
      return I.frame.meet(eval(I, s, f.sub[0]), eval(I, s, f.sub[1]));
    case FormulaKind::Join: {
      Elem acc = I.frame.bot();
      for (const Formula& g : f.sub) acc = I.frame.join(acc, eval(I, s, g));
      return acc;
    }
    case FormulaKind::Exists: {
      Elem acc = I.frame.bot();
      for (int d = 0; d < I.domain_size(); ++d) acc = I.frame.join(acc, eval(I, s.with(f.var, d), f.sub[0]));
      return acc;
    }
  }
  fail(ErrorKind::BadInput, "malformed formula");
}

inline bool sat_sequent(const Interpretation& I, const Assignment& s, const Sequent& sq) {
  return I.frame.leq(eval(I, s, sq.antecedent), eval(I, s, sq.consequent));
}

struct ValidityReport {
  bool valid = true;
  std::optional<Assignment> witness;   // least failing assignment, enumeration order
  std::vector<int> enumerated_vars;    // sorted free variables of the sequent
};

// Enumerates assignments over the sequent's free variables only, default
// element pinned to the first domain element; grades of a formula do not
// depend on variables that are not free in it, so this is exhaustive.
// Enumeration is lexicographic, so a reported witness is the least one.
inline ValidityReport valid_in(const Interpretation& I, const Sequent& sq) {
  ValidityReport rep;
  std::set<int> fv = free_vars(sq);
  rep.enumerated_vars.assign(fv.begin(), fv.end());
  const int D = I.domain_size();
  std::vector<int> digits(rep.enumerated_vars.size(), 0);
  while (true) {
    Assignment s;
    for (std::size_t i = 0; i < digits.size(); ++i) s.overrides[rep.enumerated_vars[i]] = digits[i];
    if (!sat_sequent(I, s, sq)) {
      rep.valid = false;
      rep.witness = s;
      return rep;
    }
    int k = static_cast<int>(digits.size()) - 1;
    while (k >= 0) {
      if (++digits[static_cast<std::size_t>(k)] < D) break;
      digits[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return rep;
}

}  // namespace geolog
