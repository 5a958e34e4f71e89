#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geolog/frame.hpp"
#include "geolog/semantics.hpp"
#include "geolog/syntax.hpp"

namespace geolog {

// Evaluation points: named assignments into one interpretation's domain.
struct PointSet {
  std::vector<std::string> labels;
  std::vector<Assignment> points;

  int size() const { return static_cast<int>(points.size()); }
};

// One grade per point; the concrete representative of a formula's class.
using ExtVector = std::vector<Elem>;

inline std::string vector_id(const FiniteFrame& value_frame, const ExtVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += value_frame.id_of(v[i]);
  }
  out += ")";
  return out;
}

// All assignments over the union of the generators' free variables, default
// element pinned to the first domain element. Enumeration is lexicographic
// over sorted variables, so labels are stable.
inline PointSet default_point_set(const Interpretation& I, const std::vector<Formula>& generators) {
  std::set<int> fv;
  for (const Formula& g : generators) {
    auto s = free_vars(g);
    fv.insert(s.begin(), s.end());
  }
  std::vector<int> vars(fv.begin(), fv.end());
  PointSet X;
  const int D = I.domain_size();
  std::vector<int> digits(vars.size(), 0);
  while (true) {
    Assignment s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.overrides[vars[i]] = digits[i];
    X.labels.push_back("s" + std::to_string(X.points.size()));
    X.points.push_back(std::move(s));
    int k = static_cast<int>(digits.size()) - 1;
    while (k >= 0) {
      if (++digits[static_cast<std::size_t>(k)] < D) break;
      digits[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return X;
}

inline ExtVector extent(const Interpretation& I, const PointSet& X, const Formula& f) {
  ExtVector v;
  v.reserve(X.points.size());
  for (const Assignment& s : X.points) v.push_back(eval(I, s, f));
  return v;
}

// A frame-valued topological system: points, an algebra that is itself a
// frame, and a satisfaction grid rel(point, algebra element).
struct TopoSystem {
  std::vector<std::string> point_labels;
  FiniteFrame value_frame;
  FiniteFrame alg;
  std::vector<ExtVector> rel;  // rel[a] is the column of algebra element a

  Elem rel_at(int point, Elem a) const { return rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(point)]; }
};

inline void validate_system(const TopoSystem& sys) {
  if (sys.point_labels.empty()) fail(ErrorKind::BadInput, "a system needs at least one point");
  if (sys.rel.size() != static_cast<std::size_t>(sys.alg.size()))
    fail(ErrorKind::BadInput, "rel must have one column per algebra element");
  for (const ExtVector& col : sys.rel) {
    if (col.size() != sys.point_labels.size()) fail(ErrorKind::BadInput, "rel column has the wrong length");
    for (Elem g : col)
      if (g < 0 || g >= sys.value_frame.size()) fail(ErrorKind::UnknownElement, "rel grade outside the value frame");
  }
}

struct LindenbaumResult {
  TopoSystem system;
  // Generator text -> algebra element id, in generator order.
  std::vector<std::pair<std::string, std::string>> class_map;
};

inline constexpr int kDefaultClosureCap = 10000;

// Builds the algebra of extent vectors generated by the given formulas:
// the set of extents closed under pointwise meet and join, with the constant
// top and bottom vectors (the empty meet and the empty join). Closing under
// binary joins plus bottom already gives every finite subset join, since a
// finite join folds into binary ones; the same holds for meets and top.
inline LindenbaumResult build_lindenbaum(const Interpretation& I, const PointSet& X,
                                         const std::vector<Formula>& generators,
                                         int closure_cap = kDefaultClosureCap) {
  if (generators.empty()) fail(ErrorKind::BadInput, "at least one generator formula is required");
  if (X.points.empty()) fail(ErrorKind::BadInput, "the point set must be nonempty");
  const std::size_t npts = X.points.size();
  const FiniteFrame& L = I.frame;

  std::set<ExtVector> closed;
  closed.insert(ExtVector(npts, L.top()));
  closed.insert(ExtVector(npts, L.bot()));
  std::vector<ExtVector> gen_exts;
  for (const Formula& g : generators) {
    gen_exts.push_back(extent(I, X, g));
    closed.insert(gen_exts.back());
  }

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<ExtVector> current(closed.begin(), closed.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        ExtVector m(npts), u(npts);
        for (std::size_t k = 0; k < npts; ++k) {
          m[k] = L.meet(current[i][k], current[j][k]);
          u[k] = L.join(current[i][k], current[j][k]);
        }
        if (closed.insert(std::move(m)).second) grew = true;
        if (closed.insert(std::move(u)).second) grew = true;
        if (static_cast<int>(closed.size()) > closure_cap)
          fail(ErrorKind::ClosureOverflow,
               "extent closure exceeded the cap of " + std::to_string(closure_cap) + " vectors");
      }
    }
  }

  std::vector<ExtVector> vectors(closed.begin(), closed.end());
  std::vector<std::string> ids;
  ids.reserve(vectors.size());
  for (const ExtVector& v : vectors) ids.push_back(vector_id(L, v));
  std::vector<std::pair<std::string, std::string>> leq_pairs;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (i == j) continue;
      bool below = true;
      for (std::size_t k = 0; k < npts; ++k)
        if (!L.leq(vectors[i][k], vectors[j][k])) { below = false; break; }
      if (below) leq_pairs.emplace_back(ids[i], ids[j]);
    }

  LindenbaumResult out;
  out.system.point_labels = X.labels;
  out.system.value_frame = L;
  // build re-validates that the quotient really is a frame.
  out.system.alg = FiniteFrame::build(ids, leq_pairs);
  out.system.rel = vectors;
  for (std::size_t g = 0; g < generators.size(); ++g)
    out.class_map.emplace_back(to_text(generators[g]), vector_id(L, gen_exts[g]));
  validate_system(out.system);
  return out;
}

struct AxiomReport {
  bool ok = true;
  std::string detail;
};

namespace detail {

// Subset families for the axiom checks: every subset when the algebra is
// small, otherwise all subsets of size <= 3, the empty set, and (for the
// join clause) the whole algebra.
inline std::vector<std::vector<Elem>> axiom_subsets(int n, bool include_all) {
  std::vector<std::vector<Elem>> out;
  if (n <= 10) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Elem> s;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s.push_back(i);
      out.push_back(std::move(s));
    }
    return out;
  }
  out.push_back({});
  for (Elem a = 0; a < n; ++a) out.push_back({a});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b) out.push_back({a, b});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      for (Elem c = b + 1; c < n; ++c) out.push_back({a, b, c});
  if (include_all) {
    std::vector<Elem> all(static_cast<std::size_t>(n));
    for (Elem a = 0; a < n; ++a) all[static_cast<std::size_t>(a)] = a;
    out.push_back(std::move(all));
  }
  return out;
}

inline std::string subset_ids(const FiniteFrame& f, const std::vector<Elem>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += f.id_of(s[i]);
  }
  out += "}";
  return out;
}

}  // namespace detail

// The two system axioms: rel(x, meet S) is the meet of the grades, and
// rel(x, join S) is the join of the grades, with meets/joins of S taken in
// the algebra and grades combined in the value frame.
inline AxiomReport check_system_axioms(const TopoSystem& sys) {
  validate_system(sys);
  const int npts = static_cast<int>(sys.point_labels.size());
  const int n = sys.alg.size();
  auto meet_subsets = detail::axiom_subsets(n, false);
  auto join_subsets = detail::axiom_subsets(n, true);
  std::vector<Elem> grades;
  for (const auto& S : meet_subsets) {
    Elem a = sys.alg.meet_all(S);
    for (int x = 0; x < npts; ++x) {
      grades.clear();
      for (Elem s : S) grades.push_back(sys.rel_at(x, s));
      Elem lhs = sys.rel_at(x, a);
      Elem rhs = sys.value_frame.meet_all(grades);
      if (lhs != rhs)
        return {false, "meet clause fails at point " + sys.point_labels[static_cast<std::size_t>(x)] + ", S=" +
                           detail::subset_ids(sys.alg, S) + ": rel(x, meet S)=" + sys.value_frame.id_of(lhs) +
                           " but the meet of grades is " + sys.value_frame.id_of(rhs)};
    }
  }
  for (const auto& S : join_subsets) {
    Elem a = sys.alg.join_all(S);
    for (int x = 0; x < npts; ++x) {
      grades.clear();
      for (Elem s : S) grades.push_back(sys.rel_at(x, s));
      Elem lhs = sys.rel_at(x, a);
      Elem rhs = sys.value_frame.join_all(grades);
      if (lhs != rhs)
        return {false, "join clause fails at point " + sys.point_labels[static_cast<std::size_t>(x)] + ", S=" +
                           detail::subset_ids(sys.alg, S) + ": rel(x, join S)=" + sys.value_frame.id_of(lhs) +
                           " but the join of grades is " + sys.value_frame.id_of(rhs)};
    }
  }
  return {};
}

struct SpatialReport {
  bool spatial = true;
  std::string first, second;  // algebra element ids with identical columns
};

// Spatial: distinct algebra elements are separated by at least one point.
inline SpatialReport is_spatial(const TopoSystem& sys) {
  validate_system(sys);
  for (std::size_t i = 0; i < sys.rel.size(); ++i)
    for (std::size_t j = i + 1; j < sys.rel.size(); ++j)
      if (sys.rel[i] == sys.rel[j]) return {false, sys.alg.id_of(static_cast<Elem>(i)), sys.alg.id_of(static_cast<Elem>(j))};
  return {};
}

// A frame-valued topological space: a family of grade vectors (the opens)
// over a point set, closed under pointwise meet and join with the constant
// bottom and top members.
struct LSpace {
  std::vector<std::string> point_labels;
  FiniteFrame value_frame;
  std::vector<std::string> open_names;  // "T0", "T1", ... aligned with opens
  std::vector<ExtVector> opens;
};

// Columns of a system, deduplicated and sorted. Refuses inputs that are not
// genuine systems.
inline LSpace extract_topology(const TopoSystem& sys) {
  AxiomReport axioms = check_system_axioms(sys);
  if (!axioms.ok) fail(ErrorKind::NotClosed, "input is not a topological system: " + axioms.detail);
  const std::size_t npts = sys.point_labels.size();
  std::set<ExtVector> opens(sys.rel.begin(), sys.rel.end());
  if (!opens.count(ExtVector(npts, sys.value_frame.bot())) || !opens.count(ExtVector(npts, sys.value_frame.top())))
    fail(ErrorKind::NotClosed, "the constant bottom or top vector is missing from the opens");
  std::vector<ExtVector> list(opens.begin(), opens.end());
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      ExtVector m(npts), u(npts);
      for (std::size_t k = 0; k < npts; ++k) {
        m[k] = sys.value_frame.meet(list[i][k], list[j][k]);
        u[k] = sys.value_frame.join(list[i][k], list[j][k]);
      }
      if (!opens.count(m))
        fail(ErrorKind::NotClosed, "opens are not closed under meet: " + vector_id(sys.value_frame, list[i]) +
                                       " with " + vector_id(sys.value_frame, list[j]));
      if (!opens.count(u))
        fail(ErrorKind::NotClosed, "opens are not closed under join: " + vector_id(sys.value_frame, list[i]) +
                                       " with " + vector_id(sys.value_frame, list[j]));
    }
  LSpace out;
  out.point_labels = sys.point_labels;
  out.value_frame = sys.value_frame;
  out.opens = std::move(list);
  for (std::size_t i = 0; i < out.opens.size(); ++i) out.open_names.push_back("T" + std::to_string(i));
  return out;
}

// The propositional theory of a space: one arity-0 atom per open, inclusion
// axioms mirroring the pointwise order, and union/intersection axioms over a
// declared subset policy (all subsets when there are few opens, otherwise
// size <= 3 plus the whole family).
struct PropTheory {
  bool full_policy = true;
  std::vector<std::string> propositions;  // aligned with the space's opens
  std::vector<Sequent> axioms;            // inclusions, then unions, then intersections
  int inclusion_count = 0;
  int union_count = 0;
  int intersection_count = 0;
};

inline PropTheory space_to_theory(const LSpace& space) {
  const int n = static_cast<int>(space.opens.size());
  const std::size_t npts = space.point_labels.size();
  PropTheory out;
  out.full_policy = n <= 10;
  for (const std::string& name : space.open_names) out.propositions.push_back("P_" + name);

  auto open_index = [&](const ExtVector& v) -> int {
    for (int i = 0; i < n; ++i)
      if (space.opens[static_cast<std::size_t>(i)] == v) return i;
    fail(ErrorKind::NotClosed, "space is not closed: missing " + vector_id(space.value_frame, v));
  };
  auto atom = [&](int i) { return Formula::proposition(out.propositions[static_cast<std::size_t>(i)]); };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool below = true;
      for (std::size_t k = 0; k < npts; ++k)
        if (!space.value_frame.leq(space.opens[static_cast<std::size_t>(i)][k],
                                   space.opens[static_cast<std::size_t>(j)][k])) {
          below = false;
          break;
        }
      if (below) out.axioms.push_back(Sequent{atom(i), atom(j)});
    }
  out.inclusion_count = static_cast<int>(out.axioms.size());

  auto subsets = detail::axiom_subsets(n, true);
  out.union_count = static_cast<int>(subsets.size());
  out.intersection_count = static_cast<int>(subsets.size());
  for (const auto& S : subsets) {
    ExtVector u(npts, space.value_frame.bot());
    for (Elem s : S)
      for (std::size_t k = 0; k < npts; ++k)
        u[k] = space.value_frame.join(u[k], space.opens[static_cast<std::size_t>(s)][k]);
    std::vector<Formula> members;
    for (Elem s : S) members.push_back(atom(s));
    out.axioms.push_back(Sequent{atom(open_index(u)), Formula::join_of(std::move(members))});
  }
  for (const auto& S : subsets) {
    ExtVector m(npts, space.value_frame.top());
    for (Elem s : S)
      for (std::size_t k = 0; k < npts; ++k)
        m[k] = space.value_frame.meet(m[k], space.opens[static_cast<std::size_t>(s)][k]);
    Formula lhs = Formula::top();
    bool first = true;
    for (Elem s : S) {
      lhs = first ? atom(s) : Formula::conj(std::move(lhs), atom(s));
      first = false;
    }
    out.axioms.push_back(Sequent{std::move(lhs), atom(open_index(m))});
  }
  return out;
}

struct ModelReport {
  bool ok = true;
  std::vector<std::pair<std::string, bool>> per_point;
  std::string detail;  // first failing point and axiom
};

namespace detail {

inline Elem eval_propositional(const Formula& f, const FiniteFrame& L, const std::vector<Elem>& atom_grades,
                               const std::map<std::string, int>& atom_index) {
  switch (f.kind) {
    case FormulaKind::Top:
      return L.top();
    case FormulaKind::Bot:
      return L.bot();
    case FormulaKind::Pred: {
      if (!f.terms.empty()) fail(ErrorKind::BadInput, "theory axioms must be propositional");
      auto it = atom_index.find(f.name);
      if (it == atom_index.end()) fail(ErrorKind::UnknownSymbol, "atom '" + f.name + "' names no open");
      return atom_grades[static_cast<std::size_t>(it->second)];
    }
    case FormulaKind::And:
      return L.meet(eval_propositional(f.sub[0], L, atom_grades, atom_index),
                    eval_propositional(f.sub[1], L, atom_grades, atom_index));
    case FormulaKind::Join: {
      Elem acc = L.bot();
      for (const Formula& g : f.sub) acc = L.join(acc, eval_propositional(g, L, atom_grades, atom_index));
      return acc;
    }
    default:
      fail(ErrorKind::BadInput, "theory axioms must be propositional");
  }
}

}  // namespace detail

// Interprets each atom P_T at a point as that open's grade there and checks
// every axiom pointwise.
inline ModelReport induced_model_check(const LSpace& space, const PropTheory& theory) {
  std::map<std::string, int> atom_index;
  for (std::size_t i = 0; i < theory.propositions.size(); ++i) {
    const std::string& p = theory.propositions[i];
    bool bound = false;
    for (std::size_t j = 0; j < space.open_names.size(); ++j)
      if (p == "P_" + space.open_names[j]) {
        atom_index.emplace(p, static_cast<int>(j));
        bound = true;
        break;
      }
    if (!bound) fail(ErrorKind::BadInput, "proposition '" + p + "' names no open of the space");
  }
  ModelReport rep;
  const FiniteFrame& L = space.value_frame;
  for (std::size_t x = 0; x < space.point_labels.size(); ++x) {
    std::vector<Elem> grades;
    grades.reserve(space.opens.size());
    for (const ExtVector& open : space.opens) grades.push_back(open[x]);
    bool point_ok = true;
    for (const Sequent& ax : theory.axioms) {
      Elem l = detail::eval_propositional(ax.antecedent, L, grades, atom_index);
      Elem r = detail::eval_propositional(ax.consequent, L, grades, atom_index);
      if (!L.leq(l, r)) {
        point_ok = false;
        if (rep.detail.empty())
          rep.detail = "point " + space.point_labels[x] + ": axiom '" + to_text(ax) + "' grades " + L.id_of(l) +
                       " and " + L.id_of(r);
        break;
      }
    }
    rep.per_point.emplace_back(space.point_labels[x], point_ok);
    if (!point_ok) rep.ok = false;
  }
  return rep;
}

}  // namespace geolog
