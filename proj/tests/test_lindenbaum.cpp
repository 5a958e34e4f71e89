#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "geolog/fuzz.hpp"
#include "geolog/lindenbaum.hpp"
#include "geolog/parser.hpp"
#include "geolog/semantics.hpp"
#include "oracles.hpp"

using namespace geolog;

namespace {

// Three-point chain 0 < h < 1 over {a, b} with p = (h, 1) and q = (1, 0).
Interpretation c3_pq() {
  FiniteFrame C3 = FiniteFrame::build({"0", "h", "1"}, {{"0", "h"}, {"h", "1"}});
  return make_interpretation(C3, {"a", "b"}, {}, {},
                             {{"p", {1, {"h", "1"}}}, {"q", {1, {"1", "0"}}}});
}

std::vector<Formula> pq_generators(const Interpretation& I) {
  return {parse_formula("p(x1)", I.signature), parse_formula("q(x1)", I.signature)};
}

}  // namespace

TEST_CASE("the default point set enumerates assignments in lexicographic order") {
  Interpretation I = c3_pq();
  std::vector<Formula> gens = pq_generators(I);
  PointSet X = default_point_set(I, gens);
  REQUIRE(X.labels == std::vector<std::string>{"s0", "s1"});
  REQUIRE(assignment_text(I, X.points[0]) == "default=a,x1=a");
  REQUIRE(assignment_text(I, X.points[1]) == "default=a,x1=b");
  // A closed generator yields the single empty assignment.
  std::vector<Formula> closed = {parse_formula("top", I.signature)};
  PointSet X1 = default_point_set(I, closed);
  REQUIRE(X1.size() == 1);
  REQUIRE(assignment_text(I, X1.points[0]) == "default=a");
}

TEST_CASE("the generated algebra matches the all-subsets closure oracle") {
  Interpretation I = c3_pq();
  std::vector<Formula> gens = pq_generators(I);
  PointSet X = default_point_set(I, gens);

  // Oracle first: close the generator extents under pointwise meets and
  // joins of every subset (the definition), by direct enumeration.
  std::vector<ExtVector> gen_exts;
  for (const Formula& g : gens) gen_exts.push_back(extent(I, X, g));
  auto oracle = oracles::closure_by_all_subsets(I.frame, gen_exts, X.points.size());

  const Elem h = I.frame.index_of("h"), one = I.frame.index_of("1"), zero = I.frame.index_of("0");
  std::set<ExtVector> frozen = {{zero, zero}, {h, zero}, {h, one}, {one, zero}, {one, one}};
  REQUIRE(oracle == frozen);

  LindenbaumResult res = build_lindenbaum(I, X, gens);
  REQUIRE(res.system.alg.size() == 5);
  std::set<ExtVector> built(res.system.rel.begin(), res.system.rel.end());
  REQUIRE(built == oracle);
  REQUIRE(res.system.alg.element_ids() ==
          std::vector<std::string>{"(0,0)", "(h,0)", "(h,1)", "(1,0)", "(1,1)"});
  REQUIRE(res.class_map ==
          std::vector<std::pair<std::string, std::string>>{{"p(x1)", "(h,1)"}, {"q(x1)", "(1,0)"}});
}

TEST_CASE("random generator sets agree with the closure oracle") {
  SplitRng rng(4242);
  std::vector<FiniteFrame> frames = {chain_frame(2), chain_frame(3), powerset_frame(2)};
  int built_count = 0;
  for (int i = 0; i < 60; ++i) {
    const FiniteFrame& L = frames[static_cast<std::size_t>(rng.below(3))];
    Interpretation I = gen_interpretation(rng, L, 1 + rng.below(2));
    std::vector<Formula> gens;
    int width = 1 + rng.below(2);
    for (int g = 0; g < width; ++g) gens.push_back(gen_formula(rng, 2, 1));
    PointSet X = default_point_set(I, gens);
    std::vector<ExtVector> gen_exts;
    for (const Formula& g : gens) gen_exts.push_back(extent(I, X, g));
    auto oracle = oracles::closure_by_all_subsets(I.frame, gen_exts, X.points.size());
    if (oracle.size() > 16) continue;  // keep the oracle honest and fast
    LindenbaumResult res = build_lindenbaum(I, X, gens);
    std::set<ExtVector> built(res.system.rel.begin(), res.system.rel.end());
    REQUIRE(built == oracle);
    ++built_count;
  }
  REQUIRE(built_count >= 30);
}

TEST_CASE("extents are homomorphic for conjunction and join") {
  SplitRng rng(20240);
  std::vector<FiniteFrame> frames = {chain_frame(2), chain_frame(3), powerset_frame(2)};
  for (int i = 0; i < 100; ++i) {
    const FiniteFrame& L = frames[static_cast<std::size_t>(rng.below(3))];
    Interpretation I = gen_interpretation(rng, L, 1 + rng.below(3));
    Formula a = gen_formula(rng, 3, 1), b = gen_formula(rng, 3, 1);
    PointSet X = default_point_set(I, {a, b});
    ExtVector ea = extent(I, X, a), eb = extent(I, X, b);
    ExtVector em = extent(I, X, Formula::conj(a, b)), ej = extent(I, X, Formula::disj(a, b));
    for (std::size_t k = 0; k < ea.size(); ++k) {
      REQUIRE(em[k] == L.meet(ea[k], eb[k]));
      REQUIRE(ej[k] == L.join(ea[k], eb[k]));
    }
    // Top and bottom extents are the constant vectors.
    ExtVector et = extent(I, X, Formula::top()), ebot = extent(I, X, Formula::bot());
    REQUIRE(et == ExtVector(ea.size(), L.top()));
    REQUIRE(ebot == ExtVector(ea.size(), L.bot()));
  }
}

TEST_CASE("built systems satisfy the satisfaction axioms and spatiality") {
  Interpretation I = c3_pq();
  LindenbaumResult res = build_lindenbaum(I, default_point_set(I, pq_generators(I)), pq_generators(I));
  AxiomReport axioms = check_system_axioms(res.system);
  REQUIRE(axioms.ok);
  SpatialReport spatial = is_spatial(res.system);
  REQUIRE(spatial.spatial);
}

TEST_CASE("tampering with one satisfaction cell is caught by the axiom check") {
  Interpretation I = c3_pq();
  LindenbaumResult res = build_lindenbaum(I, default_point_set(I, pq_generators(I)), pq_generators(I));
  TopoSystem broken = res.system;
  // Raise the bottom class at the first point: the empty join then fails.
  Elem bottom_class = broken.alg.index_of("(0,0)");
  broken.rel[static_cast<std::size_t>(bottom_class)][0] = broken.value_frame.index_of("1");
  AxiomReport rep = check_system_axioms(broken);
  REQUIRE_FALSE(rep.ok);
  REQUIRE_FALSE(rep.detail.empty());
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("s0"));
}

TEST_CASE("systems whose algebra elements share a column are not spatial") {
  TopoSystem sys;
  sys.point_labels = {"s0"};
  sys.value_frame = chain_frame(2);
  sys.alg = chain_frame(2);
  sys.rel = {{0}, {0}};  // both algebra elements look empty at the one point
  SpatialReport rep = is_spatial(sys);
  REQUIRE_FALSE(rep.spatial);
  REQUIRE(rep.first == "0");
  REQUIRE(rep.second == "1");
}

TEST_CASE("the closure cap aborts runaway algebras") {
  Interpretation I = c3_pq();
  std::vector<Formula> gens = pq_generators(I);
  PointSet X = default_point_set(I, gens);
  REQUIRE_THROWS_MATCHES(build_lindenbaum(I, X, gens, 3), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::ClosureOverflow;
                         }));
}

TEST_CASE("a single closed generator gives the two-class algebra") {
  Interpretation I = c3_pq();
  std::vector<Formula> gens = {parse_formula("top", I.signature)};
  PointSet X = default_point_set(I, gens);
  LindenbaumResult res = build_lindenbaum(I, X, gens);
  REQUIRE(res.system.alg.size() == 2);
  REQUIRE(is_spatial(res.system).spatial);
}

TEST_CASE("extracted topologies carry exactly the closure as opens") {
  Interpretation I = c3_pq();
  LindenbaumResult res = build_lindenbaum(I, default_point_set(I, pq_generators(I)), pq_generators(I));
  LSpace space = extract_topology(res.system);
  std::set<ExtVector> opens(space.opens.begin(), space.opens.end());
  std::set<ExtVector> rel(res.system.rel.begin(), res.system.rel.end());
  REQUIRE(opens == rel);
  REQUIRE(space.open_names == std::vector<std::string>{"T0", "T1", "T2", "T3", "T4"});
  // Tampered systems are refused.
  TopoSystem broken = res.system;
  broken.rel[static_cast<std::size_t>(broken.alg.index_of("(0,0)"))][0] = broken.value_frame.index_of("1");
  REQUIRE_THROWS_MATCHES(extract_topology(broken), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::NotClosed;
                         }));
}

TEST_CASE("the theory of the example space has the frozen axiom families") {
  Interpretation I = c3_pq();
  LindenbaumResult res = build_lindenbaum(I, default_point_set(I, pq_generators(I)), pq_generators(I));
  LSpace space = extract_topology(res.system);
  PropTheory theory = space_to_theory(space);
  REQUIRE(theory.full_policy);
  REQUIRE(theory.propositions == std::vector<std::string>{"P_T0", "P_T1", "P_T2", "P_T3", "P_T4"});
  // Inclusions: one axiom per ordered comparable pair of the 5 opens. With
  // the pointwise order over (0,0) < (h,0) < {(h,1), (1,0)} < (1,1) that is
  // 5 reflexive pairs plus 9 strict ones.
  int independent = 0;
  for (std::size_t i = 0; i < space.opens.size(); ++i)
    for (std::size_t j = 0; j < space.opens.size(); ++j) {
      bool below = true;
      for (std::size_t k = 0; k < space.point_labels.size(); ++k)
        if (!space.value_frame.leq(space.opens[i][k], space.opens[j][k])) below = false;
      if (below) ++independent;
    }
  REQUIRE(independent == 14);
  REQUIRE(theory.inclusion_count == 14);
  // Full policy: every one of the 32 subsets appears in each family.
  REQUIRE(theory.union_count == 32);
  REQUIRE(theory.intersection_count == 32);
  REQUIRE(static_cast<int>(theory.axioms.size()) == 14 + 32 + 32);
  // The space models its own theory at every point.
  ModelReport model = induced_model_check(space, theory);
  REQUIRE(model.ok);
  REQUIRE(model.per_point.size() == 2);
  for (const auto& [label, ok] : model.per_point) CHECK(ok);
}

TEST_CASE("large open families switch the theory to the bounded subset policy") {
  // The 16 elements of powerset(4), viewed as opens over a single point,
  // form a topology; 16 > 10 forces the bounded policy.
  FiniteFrame L = powerset_frame(4);
  LSpace space;
  space.point_labels = {"s0"};
  space.value_frame = L;
  for (Elem a = 0; a < L.size(); ++a) {
    space.open_names.push_back("T" + std::to_string(a));
    space.opens.push_back({a});
  }
  PropTheory theory = space_to_theory(space);
  REQUIRE_FALSE(theory.full_policy);
  // Bounded families: the subsets of size 0..3 plus the whole family, used
  // for the union and the intersection clause alike.
  const int choose2 = 16 * 15 / 2, choose3 = 16 * 15 * 14 / 6;
  REQUIRE(theory.union_count == 1 + 16 + choose2 + choose3 + 1);
  REQUIRE(theory.intersection_count == theory.union_count);
  // Ordered subset pairs of a 4-atom powerset: 3^4.
  REQUIRE(theory.inclusion_count == 81);
  ModelReport model = induced_model_check(space, theory);
  REQUIRE(model.ok);
}

TEST_CASE("model checking pinpoints axioms a space fails to satisfy") {
  // A theory transplanted onto the wrong space must fail somewhere.
  Interpretation I = c3_pq();
  LindenbaumResult res = build_lindenbaum(I, default_point_set(I, pq_generators(I)), pq_generators(I));
  LSpace space = extract_topology(res.system);
  PropTheory theory = space_to_theory(space);
  // Forge an axiom that reverses a strict inclusion: T4 = (1,1) into T0 = (0,0).
  PropTheory forged = theory;
  forged.axioms.push_back(Sequent{Formula::proposition("P_T4"), Formula::proposition("P_T0")});
  ModelReport model = induced_model_check(space, forged);
  REQUIRE_FALSE(model.ok);
  REQUIRE_FALSE(model.detail.empty());
  CHECK_THAT(model.detail, Catch::Matchers::ContainsSubstring("P_T4 |- P_T0"));
}

TEST_CASE("systems validate their shape before any check runs") {
  TopoSystem sys;
  sys.point_labels = {"s0"};
  sys.value_frame = chain_frame(2);
  sys.alg = chain_frame(2);
  sys.rel = {{0}};  // one column missing
  REQUIRE_THROWS_MATCHES(check_system_axioms(sys), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::BadInput;
                         }));
  sys.rel = {{0}, {5}};  // grade outside the value frame
  REQUIRE_THROWS_MATCHES(is_spatial(sys), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::UnknownElement;
                         }));
}
