#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geolog/fuzz.hpp"
#include "geolog/io.hpp"

namespace {

using namespace geolog;

// 0 success, 1 semantic failure, 2 parse/IO, 3 symbol resolution, 4 resource cap.
int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAPoset:
    case ErrorKind::NotALattice:
    case ErrorKind::NotAFrame:
    case ErrorKind::NotClosed:
      return 1;
    case ErrorKind::Syntax:
    case ErrorKind::BadInput:
    case ErrorKind::Io:
      return 2;
    case ErrorKind::UnknownSymbol:
    case ErrorKind::ArityMismatch:
    case ErrorKind::UnknownElement:
    case ErrorKind::UnknownDomainElement:
    case ErrorKind::Capture:
    case ErrorKind::DuplicateTarget:
      return 3;
    case ErrorKind::SizeLimit:
    case ErrorKind::ClosureOverflow:
      return 4;
  }
  return 2;
}

int cmd_frame_check(const std::string& path) {
  FiniteFrame frame;
  try {
    frame = read_frame_file(path);
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) == 1) {
      std::cout << "INVALID " << e.what() << "\n";
      return 1;
    }
    throw;
  }
  std::cout << "OK n_elements=" << frame.size() << "\n";
  return 0;
}

int cmd_eval(const std::string& interp_path, const std::string& assign_text, const std::string& formula_text) {
  Interpretation I = read_interpretation_file(interp_path);
  Assignment s = parse_assignment(I, assign_text);
  Formula f = parse_formula(formula_text, I.signature);
  std::cout << I.frame.id_of(eval(I, s, f)) << "\n";
  return 0;
}

int cmd_sequent_check(const std::string& interp_path, const std::string& sequent_text) {
  Interpretation I = read_interpretation_file(interp_path);
  Sequent sq = parse_sequent(sequent_text, I.signature);
  ValidityReport rep = valid_in(I, sq);
  if (rep.valid) {
    std::cout << "VALID\n";
    return 0;
  }
  std::cout << "INVALID witness=" << assignment_text(I, *rep.witness) << "\n";
  return 1;
}

int cmd_rules_fuzz(std::uint64_t seed, int cases, const std::string& frame_set) {
  FuzzConfig config;
  config.seed = seed;
  config.cases = cases;
  if (frame_set == "bundled")
    config.frames = bundled_fuzz_frames();
  else if (frame_set != "default")
    fail(ErrorKind::BadInput, "unknown frame set '" + frame_set + "' (expected default or bundled)");
  std::string domains;
  for (std::size_t i = 0; i < config.domain_sizes.size(); ++i)
    domains += (i ? "," : "") + std::to_string(config.domain_sizes[i]);
  std::cout << "frames=" << frame_set << " domains=" << domains << " cases=" << cases << " seed=" << seed << "\n";
  long long violations = 0;
  for (RuleId rule : kAllRules) {
    SoundnessReport rep = fuzz_rule(rule, config);
    violations += static_cast<long long>(rep.violations.size());
    std::cout << to_text(rep) << "\n";
    for (const Violation& v : rep.violations)
      std::cout << "  interpretation: " << interpretation_to_json(v.interp).dump() << "\n";
  }

  FrobeniusCounterexample cx = counterexample_frobenius();
  MatchReport shape = match_rule(cx.instance);
  Elem lhs = eval(cx.interp, *cx.conclusion.witness, cx.instance.conclusion.antecedent);
  Elem rhs = eval(cx.interp, *cx.conclusion.witness, cx.instance.conclusion.consequent);
  std::cout << "R9-unconditioned: COUNTEREXAMPLE\n"
            << "  conclusion: " << to_text(cx.instance.conclusion) << "\n"
            << "  frame: chain(2) domain=a,b\n"
            << "  side-condition: " << shape.detail << "\n"
            << "  verdict: " << (cx.conclusion.valid ? "VALID" : "INVALID") << " witness="
            << assignment_text(cx.interp, *cx.conclusion.witness) << " grades " << cx.interp.frame.id_of(lhs)
            << " vs " << cx.interp.frame.id_of(rhs) << "\n";

  if (violations > 0) {
    std::cout << "RESULT violations=" << violations << "\n";
    return 1;
  }
  std::cout << "RESULT ok\n";
  return 0;
}

int cmd_lindenbaum_build(const std::string& interp_path, const std::string& generators_path, const std::string& out_path,
                         int cap) {
  Interpretation I = read_interpretation_file(interp_path);
  std::vector<Formula> generators = read_generators_file(generators_path, I.signature);
  PointSet X = default_point_set(I, generators);
  LindenbaumResult result = build_lindenbaum(I, X, generators, cap);
  SpatialReport spatial = is_spatial(result.system);
  if (!out_path.empty()) write_text_file(out_path, system_to_json(result.system).dump(2) + "\n");
  std::cout << "alg_size=" << result.system.alg.size() << " spatial=" << (spatial.spatial ? "true" : "false") << "\n";
  return 0;
}

int cmd_system_check(const std::string& path) {
  TopoSystem sys = read_system_file(path);
  AxiomReport rep = check_system_axioms(sys);
  if (!rep.ok) {
    std::cout << "FAIL " << rep.detail << "\n";
    return 1;
  }
  std::cout << "OK points=" << sys.point_labels.size() << " alg=" << sys.alg.size() << "\n";
  return 0;
}

int cmd_system_spatial(const std::string& path) {
  TopoSystem sys = read_system_file(path);
  SpatialReport rep = is_spatial(sys);
  if (!rep.spatial) {
    std::cout << "NOT-SPATIAL first=" << rep.first << " second=" << rep.second << "\n";
    return 1;
  }
  std::cout << "SPATIAL\n";
  return 0;
}

int cmd_topology_extract(const std::string& system_path, const std::string& out_path) {
  TopoSystem sys = read_system_file(system_path);
  LSpace space = extract_topology(sys);
  if (!out_path.empty()) write_text_file(out_path, space_to_json(space).dump(2) + "\n");
  std::cout << "opens=" << space.opens.size() << "\n";
  return 0;
}

int cmd_space_theorize(const std::string& space_path, const std::string& out_path) {
  LSpace space = read_space_file(space_path);
  PropTheory theory = space_to_theory(space);
  if (!out_path.empty()) write_text_file(out_path, theory_to_text(theory));
  std::cout << "propositions=" << theory.propositions.size() << " axioms=" << theory.axioms.size() << "\n";
  ModelReport model = induced_model_check(space, theory);
  for (const auto& [label, ok] : model.per_point) std::cout << label << ": " << (ok ? "OK" : "FAIL") << "\n";
  if (!model.ok) {
    std::cout << "model check failed: " << model.detail << "\n";
    return 1;
  }
  std::cout << "all points: OK\n";
  return 0;
}

int cmd_derivation_check(const std::string& path) {
  Derivation d = read_derivation_file(path);
  DerivationReport rep = check_derivation(d);
  if (!rep.derivable) {
    for (const std::string& line : rep.failures) std::cout << "FAIL " << line << "\n";
    return 1;
  }
  std::cout << "DERIVABLE " << to_text(*rep.root_sequent) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for frame-valued geometric logic"};
  app.require_subcommand(1);
  int rc = 0;

  std::string frame_path;
  CLI::App* frame = app.add_subcommand("frame", "Frame file operations");
  frame->require_subcommand(1);
  CLI::App* frame_check = frame->add_subcommand("check", "Validate the lattice and distributivity laws");
  frame_check->add_option("frame_file", frame_path, "Frame JSON file")->required();
  frame_check->callback([&] { rc = cmd_frame_check(frame_path); });

  std::string eval_interp, eval_assign, eval_formula;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a formula's grade under an assignment");
  eval_cmd->add_option("interp_file", eval_interp, "Interpretation JSON file")->required();
  eval_cmd->add_option("assignment", eval_assign, "Assignment like default=a,x1=b")->required();
  eval_cmd->add_option("formula", eval_formula, "Formula text")->required();
  eval_cmd->callback([&] { rc = cmd_eval(eval_interp, eval_assign, eval_formula); });

  std::string seq_interp, seq_text;
  CLI::App* sequent = app.add_subcommand("sequent", "Sequent operations");
  sequent->require_subcommand(1);
  CLI::App* sequent_check = sequent->add_subcommand("check", "Check validity over all assignments");
  sequent_check->add_option("interp_file", seq_interp, "Interpretation JSON file")->required();
  sequent_check->add_option("sequent", seq_text, "Sequent like 'p(x1) |- q(x1)'")->required();
  sequent_check->callback([&] { rc = cmd_sequent_check(seq_interp, seq_text); });

  std::uint64_t fuzz_seed = 0;
  int fuzz_cases = 200;
  std::string fuzz_frames = "default";
  CLI::App* rules = app.add_subcommand("rules", "Inference rule operations");
  rules->require_subcommand(1);
  CLI::App* rules_fuzz = rules->add_subcommand("fuzz", "Soundness-fuzz every rule schema");
  rules_fuzz->add_option("--seed", fuzz_seed, "Random seed (default 0)");
  rules_fuzz->add_option("--cases", fuzz_cases, "Retained cases per rule (default 200)");
  rules_fuzz->add_option("--frames", fuzz_frames, "Frame set: default or bundled");
  rules_fuzz->callback([&] { rc = cmd_rules_fuzz(fuzz_seed, fuzz_cases, fuzz_frames); });

  std::string lin_interp, lin_gens, lin_out;
  int lin_cap = kDefaultClosureCap;
  CLI::App* lindenbaum = app.add_subcommand("lindenbaum", "Lindenbaum algebra operations");
  lindenbaum->require_subcommand(1);
  CLI::App* lin_build = lindenbaum->add_subcommand("build", "Build the topological system generated by formulas");
  lin_build->add_option("interp_file", lin_interp, "Interpretation JSON file")->required();
  lin_build->add_option("generators_file", lin_gens, "Generator formulas, one per line")->required();
  lin_build->add_option("--out", lin_out, "Write the system JSON here");
  lin_build->add_option("--cap", lin_cap, "Closure size cap (default 10000)");
  lin_build->callback([&] { rc = cmd_lindenbaum_build(lin_interp, lin_gens, lin_out, lin_cap); });

  std::string sys_check_path, sys_spatial_path;
  CLI::App* system = app.add_subcommand("system", "Topological system operations");
  system->require_subcommand(1);
  CLI::App* system_check = system->add_subcommand("check", "Check the meet/join satisfaction axioms");
  system_check->add_option("system_file", sys_check_path, "System JSON file")->required();
  system_check->callback([&] { rc = cmd_system_check(sys_check_path); });
  CLI::App* system_spatial = system->add_subcommand("spatial", "Check that points separate algebra elements");
  system_spatial->add_option("system_file", sys_spatial_path, "System JSON file")->required();
  system_spatial->callback([&] { rc = cmd_system_spatial(sys_spatial_path); });

  std::string topo_system, topo_out;
  CLI::App* topology = app.add_subcommand("topology", "Topology operations");
  topology->require_subcommand(1);
  CLI::App* topo_extract = topology->add_subcommand("extract", "Extract the open-set family of a system");
  topo_extract->add_option("system_file", topo_system, "System JSON file")->required();
  topo_extract->add_option("--out", topo_out, "Write the space JSON here");
  topo_extract->callback([&] { rc = cmd_topology_extract(topo_system, topo_out); });

  std::string space_path, theory_out;
  CLI::App* space = app.add_subcommand("space", "Topological space operations");
  space->require_subcommand(1);
  CLI::App* theorize = space->add_subcommand("theorize", "Emit the propositional theory of a space");
  theorize->add_option("space_file", space_path, "Space JSON file")->required();
  theorize->add_option("--out", theory_out, "Write the theory here");
  theorize->callback([&] { rc = cmd_space_theorize(space_path, theory_out); });

  std::string derivation_path;
  CLI::App* derivation = app.add_subcommand("derivation", "Derivation operations");
  derivation->require_subcommand(1);
  CLI::App* derivation_check = derivation->add_subcommand("check", "Check a derivation tree against the rules");
  derivation_check->add_option("derivation_file", derivation_path, "Derivation JSON file")->required();
  derivation_check->callback([&] { rc = cmd_derivation_check(derivation_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return rc;
}
