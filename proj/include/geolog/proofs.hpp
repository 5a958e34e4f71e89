#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geolog/semantics.hpp"
#include "geolog/syntax.hpp"

namespace geolog {

enum class RuleId { R1, R2, R3i, R3ii, R3iii, R3iv, R4i, R4ii, R5, R6, R7, R8i, R8ii, R9 };

inline constexpr std::array<RuleId, 14> kAllRules = {
    RuleId::R1,  RuleId::R2,  RuleId::R3i, RuleId::R3ii, RuleId::R3iii, RuleId::R3iv, RuleId::R4i,
    RuleId::R4ii, RuleId::R5, RuleId::R6,  RuleId::R7,   RuleId::R8i,   RuleId::R8ii, RuleId::R9};

inline const char* to_string(RuleId r) {
  switch (r) {
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3i: return "R3i";
    case RuleId::R3ii: return "R3ii";
    case RuleId::R3iii: return "R3iii";
    case RuleId::R3iv: return "R3iv";
    case RuleId::R4i: return "R4i";
    case RuleId::R4ii: return "R4ii";
    case RuleId::R5: return "R5";
    case RuleId::R6: return "R6";
    case RuleId::R7: return "R7";
    case RuleId::R8i: return "R8i";
    case RuleId::R8ii: return "R8ii";
    case RuleId::R9: return "R9";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_string(std::string_view name) {
  for (RuleId r : kAllRules)
    if (name == to_string(r)) return r;
  return std::nullopt;
}

// Data a rule instance needs beyond its premises and conclusion: the join
// family S, the substitution pairs, the variable pair for the quantifier
// rules. Unused fields stay empty.
struct RuleWitnesses {
  std::vector<Formula> set_members;                // S for R4i, R4ii, R5
  std::vector<std::pair<int, int>> subst_pairs;    // R7: replace first by second
  int var_x = 0;                                   // R8: the variable substituted in for the bound one
  int var_y = 0;                                   // R8: bound variable, 0 = read off the quantifier; R9: bound variable
  bool operator==(const RuleWitnesses&) const = default;
};

struct RuleInstance {
  RuleId rule = RuleId::R1;
  std::vector<Sequent> premises;
  Sequent conclusion;
  RuleWitnesses witnesses;
};

enum class MatchOutcome { Match, SchemaMismatch, SideConditionViolated };

struct MatchReport {
  MatchOutcome outcome = MatchOutcome::Match;
  std::string detail;
  bool ok() const { return outcome == MatchOutcome::Match; }
};

namespace detail {

// The printer is injective on trees, so multiset comparison can sort texts.
inline bool same_multiset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::string> ta, tb;
  ta.reserve(a.size());
  tb.reserve(b.size());
  for (const Formula& f : a) ta.push_back(to_text(f));
  for (const Formula& f : b) tb.push_back(to_text(f));
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  return ta == tb;
}

// Left-nested conjunction of component equalities x_i = y_i.
inline Formula equality_chain(const std::vector<std::pair<int, int>>& pairs) {
  Formula acc = Formula::eq(Term::variable(pairs[0].first), Term::variable(pairs[0].second));
  for (std::size_t i = 1; i < pairs.size(); ++i)
    acc = Formula::conj(std::move(acc),
                        Formula::eq(Term::variable(pairs[i].first), Term::variable(pairs[i].second)));
  return acc;
}

}  // namespace detail

// Structural check that an instance fits its rule schema, including the
// schema's side conditions. No semantics involved.
inline MatchReport match_rule(const RuleInstance& inst) {
  auto mismatch = [](const std::string& d) { return MatchReport{MatchOutcome::SchemaMismatch, d}; };
  auto violated = [](const std::string& d) { return MatchReport{MatchOutcome::SideConditionViolated, d}; };
  auto need_premises = [&](std::size_t n) -> std::optional<MatchReport> {
    if (inst.premises.size() != n)
      return mismatch(std::string(to_string(inst.rule)) + " takes " + std::to_string(n) + " premise(s), got " +
                      std::to_string(inst.premises.size()));
    return std::nullopt;
  };
  const Sequent& c = inst.conclusion;

  switch (inst.rule) {
    case RuleId::R1: {
      if (auto m = need_premises(0)) return *m;
      if (!(c.antecedent == c.consequent)) return mismatch("conclusion is not of the shape phi |- phi");
      return {};
    }
    case RuleId::R2: {
      if (auto m = need_premises(2)) return *m;
      if (!(inst.premises[0].antecedent == c.antecedent)) return mismatch("first premise antecedent differs from conclusion antecedent");
      if (!(inst.premises[0].consequent == inst.premises[1].antecedent)) return mismatch("premises do not share the cut formula");
      if (!(inst.premises[1].consequent == c.consequent)) return mismatch("second premise consequent differs from conclusion consequent");
      return {};
    }
    case RuleId::R3i: {
      if (auto m = need_premises(0)) return *m;
      if (c.consequent.kind != FormulaKind::Top) return mismatch("conclusion consequent is not top");
      return {};
    }
    case RuleId::R3ii: {
      if (auto m = need_premises(0)) return *m;
      if (c.antecedent.kind != FormulaKind::And) return mismatch("conclusion antecedent is not a conjunction");
      if (!(c.antecedent.sub[0] == c.consequent)) return mismatch("consequent is not the left conjunct");
      return {};
    }
    case RuleId::R3iii: {
      if (auto m = need_premises(0)) return *m;
      if (c.antecedent.kind != FormulaKind::And) return mismatch("conclusion antecedent is not a conjunction");
      if (!(c.antecedent.sub[1] == c.consequent)) return mismatch("consequent is not the right conjunct");
      return {};
    }
    case RuleId::R3iv: {
      if (auto m = need_premises(2)) return *m;
      if (!(inst.premises[0].antecedent == c.antecedent) || !(inst.premises[1].antecedent == c.antecedent))
        return mismatch("premises do not share the conclusion antecedent");
      if (c.consequent.kind != FormulaKind::And) return mismatch("conclusion consequent is not a conjunction");
      if (!(c.consequent.sub[0] == inst.premises[0].consequent) ||
          !(c.consequent.sub[1] == inst.premises[1].consequent))
        return mismatch("conclusion consequent is not the conjunction of the premise consequents");
      return {};
    }
    case RuleId::R4i: {
      if (auto m = need_premises(0)) return *m;
      if (c.consequent.kind != FormulaKind::Join) return mismatch("conclusion consequent is not a join");
      if (!detail::same_multiset(c.consequent.sub, inst.witnesses.set_members))
        return mismatch("join members differ from the witness family S");
      for (const Formula& g : inst.witnesses.set_members)
        if (g == c.antecedent) return {};
      return mismatch("conclusion antecedent is not a member of S");
    }
    case RuleId::R4ii: {
      if (inst.premises.size() != inst.witnesses.set_members.size())
        return mismatch("R4ii needs one premise per member of S");
      if (c.antecedent.kind != FormulaKind::Join) return mismatch("conclusion antecedent is not a join");
      if (!detail::same_multiset(c.antecedent.sub, inst.witnesses.set_members))
        return mismatch("join members differ from the witness family S");
      std::vector<Formula> premise_ants;
      premise_ants.reserve(inst.premises.size());
      for (const Sequent& p : inst.premises) {
        if (!(p.consequent == c.consequent)) return mismatch("a premise consequent differs from the conclusion consequent");
        premise_ants.push_back(p.antecedent);
      }
      if (!detail::same_multiset(premise_ants, inst.witnesses.set_members))
        return mismatch("premise antecedents do not cover S");
      return {};
    }
    case RuleId::R5: {
      if (auto m = need_premises(0)) return *m;
      if (c.antecedent.kind != FormulaKind::And) return mismatch("conclusion antecedent is not a conjunction");
      const Formula& phi = c.antecedent.sub[0];
      const Formula& joined = c.antecedent.sub[1];
      if (joined.kind != FormulaKind::Join) return mismatch("right conjunct of the antecedent is not a join");
      if (!detail::same_multiset(joined.sub, inst.witnesses.set_members))
        return mismatch("join members differ from the witness family S");
      if (c.consequent.kind != FormulaKind::Join) return mismatch("conclusion consequent is not a join");
      std::vector<Formula> distributed;
      distributed.reserve(inst.witnesses.set_members.size());
      for (const Formula& g : inst.witnesses.set_members) distributed.push_back(Formula::conj(phi, g));
      if (!detail::same_multiset(c.consequent.sub, distributed))
        return mismatch("consequent is not the distributed join over S");
      return {};
    }
    case RuleId::R6: {
      if (auto m = need_premises(0)) return *m;
      if (c.antecedent.kind != FormulaKind::Top) return mismatch("conclusion antecedent is not top");
      if (c.consequent.kind != FormulaKind::Eq) return mismatch("conclusion consequent is not an equality");
      const Term& l = c.consequent.terms[0];
      const Term& r = c.consequent.terms[1];
      if (l.kind != TermKind::Var || r.kind != TermKind::Var || l.var != r.var)
        return mismatch("equality is not between one variable and itself");
      return {};
    }
    case RuleId::R7: {
      if (auto m = need_premises(0)) return *m;
      if (inst.witnesses.subst_pairs.empty()) return mismatch("R7 needs at least one substitution pair");
      if (c.antecedent.kind != FormulaKind::And) return mismatch("conclusion antecedent is not a conjunction");
      if (!(c.antecedent.sub[0] == detail::equality_chain(inst.witnesses.subst_pairs)))
        return mismatch("left conjunct is not the equality chain of the witness pairs");
      const Formula& phi = c.antecedent.sub[1];
      Formula expected;
      try {
        expected = simultaneous_subst(phi, inst.witnesses.subst_pairs);
      } catch (const Error& e) {
        return violated(e.what());
      }
      if (!(c.consequent == expected)) return mismatch("consequent is not the substituted formula");
      return {};
    }
    // R8 matches "phi[x|y]": substitute the variable x for the bound
    // variable y. x is the required witness; y is read off the quantifier.
    case RuleId::R8i: {
      if (auto m = need_premises(1)) return *m;
      if (inst.witnesses.var_x < 1) return mismatch("R8i needs the substituted variable x");
      if (c.consequent.kind != FormulaKind::Exists) return mismatch("conclusion consequent is not a quantifier");
      if (inst.witnesses.var_y != 0 && inst.witnesses.var_y != c.consequent.var)
        return mismatch("witness y differs from the quantified variable");
      if (!(inst.premises[0].antecedent == c.antecedent))
        return mismatch("premise antecedent differs from conclusion antecedent");
      Formula expected;
      try {
        expected = subst_formula(c.consequent.sub[0], Term::variable(inst.witnesses.var_x), c.consequent.var);
      } catch (const Error& e) {
        return violated(e.what());
      }
      if (!(inst.premises[0].consequent == expected))
        return mismatch("premise consequent is not the body instantiated at x");
      return {};
    }
    case RuleId::R8ii: {
      if (auto m = need_premises(1)) return *m;
      if (inst.witnesses.var_x < 1) return mismatch("R8ii needs the substituted variable x");
      if (inst.premises[0].antecedent.kind != FormulaKind::Exists)
        return mismatch("premise antecedent is not a quantifier");
      if (inst.witnesses.var_y != 0 && inst.witnesses.var_y != inst.premises[0].antecedent.var)
        return mismatch("witness y differs from the quantified variable");
      if (!(inst.premises[0].consequent == c.consequent))
        return mismatch("premise consequent differs from conclusion consequent");
      Formula expected;
      try {
        expected = subst_formula(inst.premises[0].antecedent.sub[0], Term::variable(inst.witnesses.var_x),
                                 inst.premises[0].antecedent.var);
      } catch (const Error& e) {
        return violated(e.what());
      }
      if (!(c.antecedent == expected)) return mismatch("conclusion antecedent is not the body instantiated at x");
      return {};
    }
    case RuleId::R9: {
      if (auto m = need_premises(0)) return *m;
      if (c.antecedent.kind != FormulaKind::And) return mismatch("conclusion antecedent is not a conjunction");
      const Formula& phi = c.antecedent.sub[0];
      const Formula& ex = c.antecedent.sub[1];
      if (ex.kind != FormulaKind::Exists) return mismatch("right conjunct of the antecedent is not a quantifier");
      if (inst.witnesses.var_y != 0 && inst.witnesses.var_y != ex.var)
        return mismatch("witness y differs from the quantified variable");
      Formula expected = Formula::exists(ex.var, Formula::conj(phi, ex.sub[0]));
      if (!(c.consequent == expected))
        return mismatch("consequent is not the quantified conjunction");
      // Pulling the quantifier over phi is only sound when y is not free in
      // phi; without this the rule has a two-point countermodel.
      if (free_vars(phi).count(ex.var))
        return violated("x" + std::to_string(ex.var) + " occurs free in the left conjunct");
      return {};
    }
  }
  return MatchReport{MatchOutcome::SchemaMismatch, "unknown rule"};
}

// ---- derivations ----

struct Derivation {
  struct Node {
    RuleId rule = RuleId::R1;
    std::vector<int> children;  // indices into nodes, in premise order
    Sequent conclusion;
    RuleWitnesses witnesses;
  };
  std::vector<Node> nodes;
};

struct DerivationReport {
  bool derivable = false;
  int root = -1;
  std::optional<Sequent> root_sequent;
  std::vector<std::string> failures;  // each tagged with the node path from the root
};

// Checks tree shape (single root, no sharing, no cycles) and then every
// node's rule instance, premises taken from the children's conclusions.
inline DerivationReport check_derivation(const Derivation& d) {
  DerivationReport rep;
  const int n = static_cast<int>(d.nodes.size());
  if (n == 0) {
    rep.failures.push_back("empty derivation");
    return rep;
  }
  std::vector<int> refs(d.nodes.size(), 0);
  for (const auto& node : d.nodes) {
    for (int c : node.children) {
      if (c < 0 || c >= n) {
        rep.failures.push_back("premise index " + std::to_string(c) + " out of range");
        return rep;
      }
      ++refs[static_cast<std::size_t>(c)];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (refs[static_cast<std::size_t>(i)] > 1) {
      rep.failures.push_back("node " + std::to_string(i) + " is used as a premise more than once");
      return rep;
    }
    if (refs[static_cast<std::size_t>(i)] == 0) {
      if (rep.root >= 0) {
        rep.failures.push_back("more than one root node");
        return rep;
      }
      rep.root = i;
    }
  }
  if (rep.root < 0) {
    rep.failures.push_back("no root node; the premise graph has a cycle");
    return rep;
  }

  std::vector<std::pair<int, std::string>> stack{{rep.root, "root"}};
  int visited = 0;
  while (!stack.empty()) {
    auto [idx, path] = stack.back();
    stack.pop_back();
    ++visited;
    const auto& node = d.nodes[static_cast<std::size_t>(idx)];
    RuleInstance inst;
    inst.rule = node.rule;
    inst.conclusion = node.conclusion;
    inst.witnesses = node.witnesses;
    for (int c : node.children) inst.premises.push_back(d.nodes[static_cast<std::size_t>(c)].conclusion);
    MatchReport m = match_rule(inst);
    if (!m.ok())
      rep.failures.push_back(path + " (" + to_string(node.rule) + " concluding '" + to_text(node.conclusion) +
                             "'): " + m.detail);
    for (std::size_t k = 0; k < node.children.size(); ++k)
      stack.emplace_back(node.children[k], path + "." + std::to_string(k));
  }
  if (visited != n) {
    rep.failures.push_back("unreachable nodes; the premise graph has a cycle off the root");
    return rep;
  }
  rep.root_sequent = d.nodes[static_cast<std::size_t>(rep.root)].conclusion;
  rep.derivable = rep.failures.empty();
  return rep;
}

}  // namespace geolog
