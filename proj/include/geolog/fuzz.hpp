#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geolog/frame.hpp"
#include "geolog/proofs.hpp"
#include "geolog/semantics.hpp"
#include "geolog/syntax.hpp"

namespace geolog {

// Deterministic stream with a cheap bounded draw; every fuzz decision goes
// through this so a seed pins the whole run.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : eng_(seed) {}

  int below(int n) { return n <= 1 ? 0 : static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return below(100) < percent; }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Fixed fuzzing vocabulary: two constants, a unary function, two unary
// predicates and a binary one.
inline Signature fuzz_signature() {
  Signature sig;
  sig.declare_constant("c1");
  sig.declare_constant("c2");
  sig.declare_function("s", 1);
  sig.declare_predicate("p", 1);
  sig.declare_predicate("q", 1);
  sig.declare_predicate("r", 2);
  return sig;
}

inline constexpr int kFuzzMaxVar = 3;

inline Term gen_term(SplitRng& rng) {
  int roll = rng.below(100);
  if (roll < 55) return Term::variable(1 + rng.below(kFuzzMaxVar));
  if (roll < 80) return Term::constant(rng.chance(50) ? "c1" : "c2");
  return Term::fun("s", {Term::variable(1 + rng.below(kFuzzMaxVar))});
}

// Random formula, depth-bounded, with at most two nested quantifiers and
// join width at most three.
inline Formula gen_formula(SplitRng& rng, int depth = 4, int quantifiers_left = 2) {
  if (depth <= 0 || rng.chance(35)) {
    switch (rng.below(6)) {
      case 0:
        return Formula::top();
      case 1:
        return Formula::bot();
      case 2:
        return Formula::pred("p", {gen_term(rng)});
      case 3:
        return Formula::pred("q", {gen_term(rng)});
      case 4:
        return Formula::pred("r", {gen_term(rng), gen_term(rng)});
      default:
        return Formula::eq(gen_term(rng), gen_term(rng));
    }
  }
  int pick = rng.below(quantifiers_left > 0 ? 3 : 2);
  if (pick == 0) return Formula::conj(gen_formula(rng, depth - 1, quantifiers_left), gen_formula(rng, depth - 1, quantifiers_left));
  if (pick == 1) {
    int width = 2 + rng.below(2);
    std::vector<Formula> members;
    for (int i = 0; i < width; ++i) members.push_back(gen_formula(rng, depth - 1, quantifiers_left));
    return Formula::join_of(std::move(members));
  }
  return Formula::exists(1 + rng.below(kFuzzMaxVar), gen_formula(rng, depth - 1, quantifiers_left - 1));
}

// Random interpretation of the fuzz signature over domain {a, b, ...} of the
// requested size, with all tables drawn from the frame.
inline Interpretation gen_interpretation(SplitRng& rng, const FiniteFrame& frame, int domain_size) {
  Interpretation I;
  I.frame = frame;
  for (int i = 0; i < domain_size; ++i) I.domain.push_back(std::string(1, static_cast<char>('a' + i)));
  I.signature = fuzz_signature();
  I.constants["c1"] = rng.below(domain_size);
  I.constants["c2"] = rng.below(domain_size);
  FunctionTable s{1, {}};
  for (int i = 0; i < domain_size; ++i) s.values.push_back(rng.below(domain_size));
  I.functions["s"] = std::move(s);
  auto random_table = [&](int arity) {
    PredicateTable t{arity, {}};
    int cells = power(domain_size, arity);
    for (int i = 0; i < cells; ++i) t.values.push_back(rng.below(frame.size()));
    return t;
  };
  I.predicates["p"] = random_table(1);
  I.predicates["q"] = random_table(1);
  I.predicates["r"] = random_table(2);
  validate_interpretation(I);
  return I;
}

struct NamedFrame {
  std::string name;
  FiniteFrame frame;
};

inline std::vector<NamedFrame> default_fuzz_frames() {
  return {{"chain(2)", chain_frame(2)}, {"chain(3)", chain_frame(3)}, {"powerset(2)", powerset_frame(2)}};
}

inline std::vector<NamedFrame> bundled_fuzz_frames() {
  return {{"chain(2)", chain_frame(2)},    {"chain(3)", chain_frame(3)},  {"chain(4)", chain_frame(4)},
          {"chain(5)", chain_frame(5)},    {"powerset(2)", powerset_frame(2)},
          {"powerset(3)", powerset_frame(3)}, {"product(chain(2),chain(3))", product_frame(chain_frame(2), chain_frame(3))}};
}

struct FuzzConfig {
  std::vector<NamedFrame> frames = default_fuzz_frames();
  std::vector<int> domain_sizes = {1, 2, 3};
  int cases = 200;
  std::uint64_t seed = 0;
  int attempt_factor = 500;  // attempts budget = cases * attempt_factor
  int inner_tries = 50;      // budget for finding each valid premise
};

struct Violation {
  std::string frame_name;
  int domain_size = 0;
  Interpretation interp;
  RuleInstance instance;
  ValidityReport conclusion_report;
};

struct SoundnessReport {
  RuleId rule = RuleId::R1;
  std::uint64_t seed = 0;
  int cases_requested = 0;
  int retained = 0;        // instances whose premises all came out valid
  long long attempts = 0;  // candidate draws, including rejected ones
  int passes = 0;
  std::vector<Violation> violations;
};

namespace detail {

// Draws a formula until the sequent premise becomes valid, or gives up.
inline std::optional<Formula> find_consequent_above(SplitRng& rng, const Interpretation& I, const Formula& ant,
                                                    int tries) {
  for (int t = 0; t < tries; ++t) {
    Formula cand = gen_formula(rng);
    if (valid_in(I, Sequent{ant, cand}).valid) return cand;
  }
  return std::nullopt;
}

inline std::optional<Formula> find_antecedent_below(SplitRng& rng, const Interpretation& I, const Formula& con,
                                                    int tries) {
  for (int t = 0; t < tries; ++t) {
    Formula cand = gen_formula(rng);
    if (valid_in(I, Sequent{cand, con}).valid) return cand;
  }
  return std::nullopt;
}

// A substitution target that will not be captured: retry until the
// instantiation goes through.
inline std::optional<std::pair<Formula, int>> find_safe_instantiation(SplitRng& rng, const Formula& body, int x,
                                                                      int tries) {
  for (int t = 0; t < tries; ++t) {
    int y = 1 + rng.below(kFuzzMaxVar);
    try {
      return std::make_pair(subst_formula(body, Term::variable(y), x), y);
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

// One candidate instance of the rule, premises guaranteed valid in I (that
// is the retention condition); nullopt when the draw budget runs out.
inline std::optional<RuleInstance> gen_instance(SplitRng& rng, const Interpretation& I, RuleId rule, int tries) {
  switch (rule) {
    case RuleId::R1: {
      Formula f = gen_formula(rng);
      return RuleInstance{rule, {}, Sequent{f, f}, {}};
    }
    case RuleId::R2: {
      Formula f = gen_formula(rng);
      auto mid = find_consequent_above(rng, I, f, tries);
      if (!mid) return std::nullopt;
      auto top = find_consequent_above(rng, I, *mid, tries);
      if (!top) return std::nullopt;
      return RuleInstance{rule, {Sequent{f, *mid}, Sequent{*mid, *top}}, Sequent{f, *top}, {}};
    }
    case RuleId::R3i: {
      Formula f = gen_formula(rng);
      return RuleInstance{rule, {}, Sequent{f, Formula::top()}, {}};
    }
    case RuleId::R3ii: {
      Formula a = gen_formula(rng), b = gen_formula(rng);
      return RuleInstance{rule, {}, Sequent{Formula::conj(a, b), a}, {}};
    }
    case RuleId::R3iii: {
      Formula a = gen_formula(rng), b = gen_formula(rng);
      return RuleInstance{rule, {}, Sequent{Formula::conj(a, b), b}, {}};
    }
    case RuleId::R3iv: {
      Formula f = gen_formula(rng);
      auto a = find_consequent_above(rng, I, f, tries);
      if (!a) return std::nullopt;
      auto b = find_consequent_above(rng, I, f, tries);
      if (!b) return std::nullopt;
      return RuleInstance{rule, {Sequent{f, *a}, Sequent{f, *b}}, Sequent{f, Formula::conj(*a, *b)}, {}};
    }
    case RuleId::R4i: {
      int width = 1 + rng.below(3);
      std::vector<Formula> members;
      for (int i = 0; i < width; ++i) members.push_back(gen_formula(rng));
      int chosen = rng.below(width);
      RuleWitnesses w;
      w.set_members = members;
      return RuleInstance{rule, {}, Sequent{members[static_cast<std::size_t>(chosen)], Formula::join_of(std::move(members))}, std::move(w)};
    }
    case RuleId::R4ii: {
      Formula target = gen_formula(rng);
      int width = 1 + rng.below(3);
      std::vector<Formula> members;
      std::vector<Sequent> premises;
      for (int i = 0; i < width; ++i) {
        auto below = find_antecedent_below(rng, I, target, tries);
        if (!below) return std::nullopt;
        members.push_back(*below);
        premises.push_back(Sequent{*below, target});
      }
      RuleWitnesses w;
      w.set_members = members;
      return RuleInstance{rule, std::move(premises), Sequent{Formula::join_of(std::move(members)), target}, std::move(w)};
    }
    case RuleId::R5: {
      Formula f = gen_formula(rng);
      int width = 1 + rng.below(3);
      std::vector<Formula> members, distributed;
      for (int i = 0; i < width; ++i) {
        members.push_back(gen_formula(rng));
        distributed.push_back(Formula::conj(f, members.back()));
      }
      RuleWitnesses w;
      w.set_members = members;
      return RuleInstance{rule,
                          {},
                          Sequent{Formula::conj(std::move(f), Formula::join_of(std::move(members))),
                                  Formula::join_of(std::move(distributed))},
                          std::move(w)};
    }
    case RuleId::R6: {
      int x = 1 + rng.below(kFuzzMaxVar);
      return RuleInstance{rule, {}, Sequent{Formula::top(), Formula::eq(Term::variable(x), Term::variable(x))}, {}};
    }
    case RuleId::R7: {
      for (int t = 0; t < tries; ++t) {
        Formula f = gen_formula(rng);
        int width = 1 + rng.below(2);
        std::vector<std::pair<int, int>> pairs;
        std::vector<int> used;
        bool clash = false;
        for (int i = 0; i < width; ++i) {
          int target = 1 + rng.below(kFuzzMaxVar);
          if (std::find(used.begin(), used.end(), target) != used.end()) { clash = true; break; }
          used.push_back(target);
          pairs.emplace_back(target, 1 + rng.below(kFuzzMaxVar));
        }
        if (clash) continue;
        Formula chain = Formula::eq(Term::variable(pairs[0].first), Term::variable(pairs[0].second));
        for (std::size_t i = 1; i < pairs.size(); ++i)
          chain = Formula::conj(std::move(chain),
                                Formula::eq(Term::variable(pairs[i].first), Term::variable(pairs[i].second)));
        Formula substituted;
        try {
          substituted = simultaneous_subst(f, pairs);
        } catch (const Error&) {
          continue;
        }
        RuleWitnesses w;
        w.subst_pairs = pairs;
        return RuleInstance{rule, {}, Sequent{Formula::conj(std::move(chain), f), std::move(substituted)}, std::move(w)};
      }
      return std::nullopt;
    }
    // For R8, "phi[x|y]" substitutes x for the bound variable y.
    case RuleId::R8i: {
      // Premise ant |- body[x|y]; conclusion ant |- exists y . body.
      for (int t = 0; t < tries; ++t) {
        Formula body = gen_formula(rng, 3, 1);
        int y = 1 + rng.below(kFuzzMaxVar);
        auto inst = find_safe_instantiation(rng, body, y, tries);
        if (!inst) continue;
        Formula ant = gen_formula(rng);
        if (!valid_in(I, Sequent{ant, inst->first}).valid) continue;
        RuleWitnesses w;
        w.var_x = inst->second;
        w.var_y = y;
        return RuleInstance{rule, {Sequent{ant, inst->first}}, Sequent{std::move(ant), Formula::exists(y, std::move(body))}, std::move(w)};
      }
      return std::nullopt;
    }
    case RuleId::R8ii: {
      // Premise exists y . body |- con; conclusion body[x|y] |- con.
      for (int t = 0; t < tries; ++t) {
        Formula body = gen_formula(rng, 3, 1);
        int y = 1 + rng.below(kFuzzMaxVar);
        auto inst = find_safe_instantiation(rng, body, y, tries);
        if (!inst) continue;
        Formula con = gen_formula(rng);
        if (!valid_in(I, Sequent{Formula::exists(y, body), con}).valid) continue;
        RuleWitnesses w;
        w.var_x = inst->second;
        w.var_y = y;
        return RuleInstance{rule, {Sequent{Formula::exists(y, std::move(body)), con}}, Sequent{std::move(inst->first), std::move(con)}, std::move(w)};
      }
      return std::nullopt;
    }
    case RuleId::R9: {
      for (int t = 0; t < tries; ++t) {
        Formula f = gen_formula(rng, 3, 1);
        Formula body = gen_formula(rng, 3, 1);
        int y = 1 + rng.below(kFuzzMaxVar);
        if (free_vars(f).count(y)) continue;  // side condition
        RuleWitnesses w;
        w.var_y = y;
        return RuleInstance{rule,
                            {},
                            Sequent{Formula::conj(f, Formula::exists(y, body)),
                                    Formula::exists(y, Formula::conj(f, body))},
                            std::move(w)};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Fuzzes one rule: draws instances with valid premises across the configured
// frames and domain sizes, then demands the conclusion hold as well.
inline SoundnessReport fuzz_rule(RuleId rule, const FuzzConfig& config) {
  SoundnessReport rep;
  rep.rule = rule;
  rep.cases_requested = config.cases;
  std::size_t rule_index = 0;
  for (std::size_t i = 0; i < kAllRules.size(); ++i)
    if (kAllRules[i] == rule) rule_index = i;
  rep.seed = config.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(rule_index + 1));
  SplitRng rng(rep.seed);
  const long long budget = static_cast<long long>(config.cases) * config.attempt_factor;
  while (rep.retained < config.cases && rep.attempts < budget) {
    ++rep.attempts;
    const NamedFrame& nf = config.frames[static_cast<std::size_t>(rng.below(static_cast<int>(config.frames.size())))];
    int dsz = config.domain_sizes[static_cast<std::size_t>(rng.below(static_cast<int>(config.domain_sizes.size())))];
    Interpretation I = gen_interpretation(rng, nf.frame, dsz);
    auto inst = detail::gen_instance(rng, I, rule, config.inner_tries);
    if (!inst) continue;
    MatchReport shape = match_rule(*inst);
    if (!shape.ok())
      fail(ErrorKind::BadInput, "generated a malformed " + std::string(to_string(rule)) + " instance: " + shape.detail);
    bool premises_ok = true;
    for (const Sequent& prem : inst->premises)
      if (!valid_in(I, prem).valid) { premises_ok = false; break; }
    if (!premises_ok) continue;
    ++rep.retained;
    ValidityReport conclusion = valid_in(I, inst->conclusion);
    if (conclusion.valid) {
      ++rep.passes;
    } else {
      rep.violations.push_back(Violation{nf.name, dsz, I, *inst, conclusion});
    }
  }
  return rep;
}

inline std::vector<SoundnessReport> fuzz_all_rules(const FuzzConfig& config) {
  std::vector<SoundnessReport> out;
  for (RuleId rule : kAllRules) out.push_back(fuzz_rule(rule, config));
  return out;
}

inline std::string to_text(const SoundnessReport& rep) {
  std::string out = std::string(to_string(rep.rule)) + " pass=" + std::to_string(rep.passes) +
                    " fail=" + std::to_string(rep.violations.size()) + " cases=" + std::to_string(rep.retained) +
                    " attempts=" + std::to_string(rep.attempts) + " seed=" + std::to_string(rep.seed);
  for (const Violation& v : rep.violations) {
    out += "\nVIOLATION rule=" + std::string(to_string(rep.rule)) + " frame=" + v.frame_name +
           " domain_size=" + std::to_string(v.domain_size);
    for (const Sequent& prem : v.instance.premises) out += "\n  premise: " + to_text(prem);
    out += "\n  conclusion: " + to_text(v.instance.conclusion);
    if (v.conclusion_report.witness) out += "\n  witness: " + assignment_text(v.interp, *v.conclusion_report.witness);
  }
  return out;
}

struct FrobeniusCounterexample {
  Interpretation interp;
  RuleInstance instance;      // the R9 shape with the side condition violated
  ValidityReport conclusion;  // invalid, with the least witness
};

// Dropping the side condition on the frame distributivity of exists breaks
// soundness: over the two-point chain with p true only at a and q true only
// at b, p(x1) /\ exists x1 . q(x1) is full at x1=a while
// exists x1 . (p(x1) /\ q(x1)) is empty.
inline FrobeniusCounterexample counterexample_frobenius() {
  FrobeniusCounterexample out;
  out.interp.frame = chain_frame(2);
  out.interp.domain = {"a", "b"};
  Signature sig;
  sig.declare_predicate("p", 1);
  sig.declare_predicate("q", 1);
  out.interp.signature = std::move(sig);
  out.interp.predicates["p"] = PredicateTable{1, {1, 0}};
  out.interp.predicates["q"] = PredicateTable{1, {0, 1}};
  validate_interpretation(out.interp);

  Formula f = Formula::pred("p", {Term::variable(1)});
  Formula body = Formula::pred("q", {Term::variable(1)});
  RuleWitnesses w;
  w.var_y = 1;
  out.instance = RuleInstance{RuleId::R9,
                              {},
                              Sequent{Formula::conj(f, Formula::exists(1, body)),
                                      Formula::exists(1, Formula::conj(f, body))},
                              std::move(w)};
  out.conclusion = valid_in(out.interp, out.instance.conclusion);
  return out;
}

}  // namespace geolog
