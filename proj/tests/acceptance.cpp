// End-to-end acceptance checks. Run as: acceptance <cli-binary> <data-dir>.
// Each criterion prints exactly one PASS/FAIL line; the exit status is 0 only
// if every criterion passes within its time budget.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geolog/fuzz.hpp"
#include "geolog/io.hpp"
#include "geolog/lindenbaum.hpp"
#include "geolog/parser.hpp"
#include "geolog/proofs.hpp"
#include "geolog/semantics.hpp"

using namespace geolog;

namespace {

std::string g_cli;
std::string g_data;

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run_command(const std::string& cmd) {
  RunResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  r.status = pclose(pipe);
  return r;
}

int g_passed = 0, g_total = 0;

void criterion(int number, const std::string& label, long budget_ms,
               const std::function<std::string()>& body) {
  ++g_total;
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  try {
    detail = body();
  } catch (const Error& e) {
    detail = std::string("unexpected error: ") + e.what();
  } catch (const std::exception& e) {
    detail = std::string("unexpected exception: ") + e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (detail.empty() && ms > budget_ms)
    detail = "took " + std::to_string(ms) + " ms, budget " + std::to_string(budget_ms) + " ms";
  if (detail.empty()) {
    ++g_passed;
    std::cout << "PASS criterion " << number << ": " << label << " (" << ms << " ms)\n";
  } else {
    std::cout << "FAIL criterion " << number << ": " << label << ": " << detail << "\n";
  }
}

// ---------------------------------------------------------------------------

std::string frame_laws() {
  for (int n = 2; n <= 6; ++n) chain_frame(n);
  powerset_frame(2);
  powerset_frame(3);
  product_frame(chain_frame(2), chain_frame(3));
  for (const std::string& name : {"pentagon", "m3"}) {
    try {
      read_frame_file(g_data + "/frames/" + name + ".json");
      return name + " was accepted";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotAFrame) return name + ": wrong error kind: " + e.what();
      if (std::string(e.what()).find("distributivity") == std::string::npos)
        return name + ": witness missing from: " + e.what();
    }
  }
  return "";
}

std::string soundness_fuzz() {
  FuzzConfig config;
  config.cases = 200;
  config.seed = 20260818;
  std::vector<SoundnessReport> reports = fuzz_all_rules(config);
  if (reports.size() != 14) return "expected 14 rule reports, got " + std::to_string(reports.size());
  for (const SoundnessReport& rep : reports) {
    if (rep.retained < 200)
      return std::string(to_string(rep.rule)) + " retained only " + std::to_string(rep.retained) + " cases";
    if (!rep.violations.empty())
      return std::string(to_string(rep.rule)) + " has " + std::to_string(rep.violations.size()) + " violations";
  }
  return "";
}

std::string frobenius_countermodel() {
  FrobeniusCounterexample cex = counterexample_frobenius();
  if (cex.conclusion.valid) return "conclusion was reported valid";
  if (!cex.conclusion.witness) return "no witness reported";
  std::string w = assignment_text(cex.interp, *cex.conclusion.witness);
  if (w != "default=a,x1=a") return "witness was " + w;
  Elem l = eval(cex.interp, *cex.conclusion.witness, cex.instance.conclusion.antecedent);
  Elem r = eval(cex.interp, *cex.conclusion.witness, cex.instance.conclusion.consequent);
  std::string grades = cex.interp.frame.id_of(l) + " vs " + cex.interp.frame.id_of(r);
  if (grades != "1 vs 0") return "grades were " + grades;
  MatchReport match = match_rule(cex.instance);
  if (match.outcome != MatchOutcome::SideConditionViolated)
    return "the R9 side condition was not flagged";
  return "";
}

std::string substitution_theorem() {
  SplitRng rng(424243);
  std::vector<FiniteFrame> frames = {chain_frame(2), chain_frame(3), powerset_frame(2)};
  long checked = 0;
  for (int i = 0; i < 3000; ++i) {
    const FiniteFrame& L = frames[static_cast<std::size_t>(rng.below(3))];
    Interpretation I = gen_interpretation(rng, L, 2);
    Formula f = gen_formula(rng, 3, 1);
    Term t = gen_term(rng);
    int x = 1 + rng.below(kFuzzMaxVar);
    Formula substituted;
    try {
      substituted = subst_formula(f, t, x);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Capture) continue;
      throw;
    }
    for (int mask = 0; mask < 8; ++mask) {
      Assignment s{0, {{1, mask & 1}, {2, (mask >> 1) & 1}, {3, (mask >> 2) & 1}}};
      Assignment updated = s.with(x, eval_term(I, s, t));
      if (eval(I, s, substituted) != eval(I, updated, f))
        return "mismatch at case " + std::to_string(i) + ", " + assignment_text(I, s) + ", formula " + to_text(f);
      ++checked;
    }
  }
  if (checked < 8000) return "only " + std::to_string(checked) + " comparisons ran";
  return "";
}

std::string agreement_theorems() {
  SplitRng rng(515151);
  std::vector<FiniteFrame> frames = {chain_frame(2), chain_frame(3), powerset_frame(2)};
  for (int i = 0; i < 1000; ++i) {
    const FiniteFrame& L = frames[static_cast<std::size_t>(rng.below(3))];
    Interpretation I = gen_interpretation(rng, L, 1 + rng.below(3));
    Term t = gen_term(rng);
    Formula f = gen_formula(rng, 3, 2);
    // Build s, then s' agreeing with s on the (free) variables and nowhere else.
    Assignment s{rng.below(I.domain_size()), {}};
    for (int v = 1; v <= kFuzzMaxVar; ++v) s.overrides[v] = rng.below(I.domain_size());
    std::set<int> keep_term = term_vars(t);
    std::set<int> keep_formula = free_vars(f);
    Assignment st = s, sf = s;
    // Every variable the generators can emit has an override in s, so the
    // default element never leaks in; scribbling on the non-free ones (and a
    // couple past the generator's range) yields an s' agreeing exactly on
    // the free variables.
    for (int v = 1; v <= kFuzzMaxVar + 2; ++v) {
      if (!keep_term.count(v)) st.overrides[v] = rng.below(I.domain_size());
      if (!keep_formula.count(v)) sf.overrides[v] = rng.below(I.domain_size());
    }
    if (eval_term(I, s, t) != eval_term(I, st, t))
      return "term disagreement at case " + std::to_string(i) + ": " + to_text(t);
    if (eval(I, s, f) != eval(I, sf, f))
      return "formula disagreement at case " + std::to_string(i) + ": " + to_text(f);
  }
  return "";
}

std::string lindenbaum_pipeline() {
  Interpretation I = read_interpretation_file(g_data + "/interpretations/c3_pq.json");
  std::vector<Formula> gens = read_generators_file(g_data + "/generators/pq.txt", I.signature);
  PointSet X = default_point_set(I, gens);
  LindenbaumResult res = build_lindenbaum(I, X, gens);
  if (res.system.alg.size() != 5) return "alg_size=" + std::to_string(res.system.alg.size());
  std::vector<std::string> want = {"(0,0)", "(h,0)", "(h,1)", "(1,0)", "(1,1)"};
  if (res.system.alg.element_ids() != want) {
    std::string got;
    for (const std::string& id : res.system.alg.element_ids()) got += id + " ";
    return "element set was " + got;
  }
  AxiomReport axioms = check_system_axioms(res.system);
  if (!axioms.ok) return "axioms: " + axioms.detail;
  SpatialReport spatial = is_spatial(res.system);
  if (!spatial.spatial) return "not spatial: " + spatial.first + " vs " + spatial.second;
  LSpace space = extract_topology(res.system);
  std::set<ExtVector> opens(space.opens.begin(), space.opens.end());
  std::set<ExtVector> rel(res.system.rel.begin(), res.system.rel.end());
  if (opens != rel) return "opens differ from the closure";
  PropTheory theory = space_to_theory(space);
  ModelReport model = induced_model_check(space, theory);
  if (!model.ok) return "model check: " + model.detail;
  if (model.per_point.size() != 2) return "expected 2 points";
  for (const auto& [label, ok] : model.per_point)
    if (!ok) return "model check failed at " + label;
  return "";
}

std::string ext_homomorphism() {
  SplitRng rng(626262);
  std::vector<FiniteFrame> frames = {chain_frame(2), chain_frame(3), powerset_frame(2)};
  for (int i = 0; i < 100; ++i) {
    const FiniteFrame& L = frames[static_cast<std::size_t>(rng.below(3))];
    Interpretation I = gen_interpretation(rng, L, 1 + rng.below(3));
    Formula a = gen_formula(rng, 3, 1), b = gen_formula(rng, 3, 1);
    PointSet X = default_point_set(I, {a, b});
    ExtVector ea = extent(I, X, a), eb = extent(I, X, b);
    ExtVector em = extent(I, X, Formula::conj(a, b)), ej = extent(I, X, Formula::disj(a, b));
    for (std::size_t k = 0; k < ea.size(); ++k) {
      if (em[k] != L.meet(ea[k], eb[k])) return "meet mismatch at case " + std::to_string(i);
      if (ej[k] != L.join(ea[k], eb[k])) return "join mismatch at case " + std::to_string(i);
    }
  }
  return "";
}

std::string fuzz_determinism() {
  const std::string cmd = g_cli + " rules fuzz --seed 11 --cases 100";
  RunResult first = run_command(cmd);
  RunResult second = run_command(cmd);
  if (first.status != 0) return "first run exited with status " + std::to_string(first.status);
  if (second.status != 0) return "second run exited with status " + std::to_string(second.status);
  if (first.output.empty()) return "no output";
  if (first.output != second.output) return "reports differ between runs";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <cli-binary> <data-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];

  criterion(1, "frame law suite over the bundled constructors", 1000, frame_laws);
  criterion(2, "soundness fuzz, 14 rules x 200 cases", 60000, soundness_fuzz);
  criterion(3, "unconditioned Frobenius countermodel", 1000, frobenius_countermodel);
  criterion(4, "substitution theorem on random formulas", 30000, substitution_theorem);
  criterion(5, "term and formula agreement theorems", 10000, agreement_theorems);
  criterion(6, "Lindenbaum pipeline on the two-generator example", 1000, lindenbaum_pipeline);
  criterion(7, "extents are meet/join homomorphic", 10000, ext_homomorphism);
  criterion(8, "fuzz reports are byte-identical across reruns", 60000, fuzz_determinism);

  std::cout << "SUMMARY " << g_passed << "/" << g_total << " passed\n";
  return g_passed == g_total ? 0 : 1;
}
