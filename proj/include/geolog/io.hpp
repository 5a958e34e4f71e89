#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geolog/errors.hpp"
#include "geolog/frame.hpp"
#include "geolog/lindenbaum.hpp"
#include "geolog/parser.hpp"
#include "geolog/proofs.hpp"
#include "geolog/semantics.hpp"
#include "geolog/syntax.hpp"

namespace geolog {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorKind::BadInput, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "failed while writing '" + path + "'");
}

namespace detail {

inline void require_keys(const Json& j, const std::string& what, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional = {}) {
  if (!j.is_object()) fail(ErrorKind::BadInput, what + " must be a JSON object");
  for (const std::string& k : required)
    if (!j.contains(k)) fail(ErrorKind::BadInput, what + " is missing the key '" + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                 std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) fail(ErrorKind::BadInput, what + " has an unexpected key '" + k + "'");
  }
}

inline std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::BadInput, what + " must be an array of strings");
  std::vector<std::string> out;
  for (const Json& e : j) {
    if (!e.is_string()) fail(ErrorKind::BadInput, what + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

// Frame files: {"elements": [...], "leq": [["a","b"], ...]}. Pairs may be
// any generating relation; the builder closes it.
inline FiniteFrame frame_from_json(const Json& j) {
  detail::require_keys(j, "frame", {"elements", "leq"});
  std::vector<std::string> elements = detail::string_list(j.at("elements"), "frame.elements");
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!j.at("leq").is_array()) fail(ErrorKind::BadInput, "frame.leq must be an array of pairs");
  for (const Json& p : j.at("leq")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      fail(ErrorKind::BadInput, "frame.leq entries must be [\"a\", \"b\"] pairs");
    pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return FiniteFrame::build(elements, pairs);
}

inline Json frame_to_json(const FiniteFrame& f) {
  Json j;
  j["elements"] = f.element_ids();
  Json pairs = Json::array();
  for (Elem a = 0; a < f.size(); ++a)
    for (Elem b = 0; b < f.size(); ++b)
      if (a != b && f.leq(a, b)) pairs.push_back(Json::array({f.id_of(a), f.id_of(b)}));
  j["leq"] = pairs;
  return j;
}

inline FiniteFrame read_frame_file(const std::string& path) { return frame_from_json(read_json_file(path)); }

namespace detail {

// Table values keyed by comma-joined domain ids, with an optional "..."
// default that fills every unlisted cell.
template <typename Store>
inline void fill_table(const Json& spec, const std::string& what, const Interpretation& I, int arity, Store&& store,
                       const std::function<int(const Json&, const std::string&)>& decode) {
  if (!spec.is_object()) fail(ErrorKind::BadInput, what + ".table must be an object");
  int cells = power(I.domain_size(), arity);
  std::vector<int> values(static_cast<std::size_t>(cells), -1);
  bool has_default = false;
  int default_value = 0;
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (it.key() == "...") {
      has_default = true;
      default_value = decode(it.value(), what + ".table['...']");
      continue;
    }
    std::vector<std::string> parts = split_commas(it.key());
    if (static_cast<int>(parts.size()) != arity)
      fail(ErrorKind::BadInput, what + ".table key '" + it.key() + "' does not have " + std::to_string(arity) +
                                    " components");
    std::vector<int> tuple;
    for (const std::string& part : parts) tuple.push_back(I.domain_index(part));
    values[static_cast<std::size_t>(tuple_index(I.domain_size(), tuple))] = decode(it.value(), what + ".table['" + it.key() + "']");
  }
  for (int i = 0; i < cells; ++i) {
    if (values[static_cast<std::size_t>(i)] < 0) {
      if (!has_default) fail(ErrorKind::BadInput, what + ".table is not total and has no '...' default");
      values[static_cast<std::size_t>(i)] = default_value;
    }
  }
  store(std::move(values));
}

}  // namespace detail

// Interpretation files:
// {
//   "frame": {...} | "path/to/frame.json",
//   "domain": ["a", "b"],
//   "constants": {"c1": "a"},
//   "functions": {"s": {"arity": 1, "table": {"a": "b", "...": "a"}}},
//   "predicates": {"p": {"arity": 1, "table": {"a": "1", "...": "0"}}}
// }
// A string frame is a path resolved relative to base_dir.
inline Interpretation interpretation_from_json(const Json& j, const std::string& base_dir) {
  detail::require_keys(j, "interpretation", {"frame", "domain"}, {"constants", "functions", "predicates"});
  Interpretation I;
  if (j.at("frame").is_string()) {
    std::filesystem::path p = j.at("frame").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    I.frame = read_frame_file(p.string());
  } else {
    I.frame = frame_from_json(j.at("frame"));
  }
  I.domain = detail::string_list(j.at("domain"), "interpretation.domain");
  if (I.domain.empty()) fail(ErrorKind::BadInput, "interpretation.domain must be nonempty");

  auto decode_domain = [&](const Json& v, const std::string& what) {
    if (!v.is_string()) fail(ErrorKind::BadInput, what + " must be a domain element id string");
    return I.domain_index(v.get<std::string>());
  };
  auto decode_grade = [&](const Json& v, const std::string& what) {
    if (!v.is_string()) fail(ErrorKind::BadInput, what + " must be a frame element id string");
    return static_cast<int>(I.frame.index_of(v.get<std::string>()));
  };

  if (j.contains("constants")) {
    const Json& cs = j.at("constants");
    if (!cs.is_object()) fail(ErrorKind::BadInput, "interpretation.constants must be an object");
    for (auto it = cs.begin(); it != cs.end(); ++it) {
      I.signature.declare_constant(it.key());
      I.constants[it.key()] = decode_domain(it.value(), "constants['" + it.key() + "']");
    }
  }
  if (j.contains("functions")) {
    const Json& fs = j.at("functions");
    if (!fs.is_object()) fail(ErrorKind::BadInput, "interpretation.functions must be an object");
    for (auto it = fs.begin(); it != fs.end(); ++it) {
      detail::require_keys(it.value(), "functions['" + it.key() + "']", {"arity", "table"});
      if (!it.value().at("arity").is_number_integer())
        fail(ErrorKind::BadInput, "functions['" + it.key() + "'].arity must be an integer");
      int arity = it.value().at("arity").get<int>();
      I.signature.declare_function(it.key(), arity);
      FunctionTable table{arity, {}};
      detail::fill_table(
          it.value().at("table"), "functions['" + it.key() + "']", I, arity,
          [&](std::vector<int>&& vals) { table.values = std::move(vals); },
          decode_domain);
      I.functions[it.key()] = std::move(table);
    }
  }
  if (j.contains("predicates")) {
    const Json& ps = j.at("predicates");
    if (!ps.is_object()) fail(ErrorKind::BadInput, "interpretation.predicates must be an object");
    for (auto it = ps.begin(); it != ps.end(); ++it) {
      detail::require_keys(it.value(), "predicates['" + it.key() + "']", {"arity", "table"});
      if (!it.value().at("arity").is_number_integer())
        fail(ErrorKind::BadInput, "predicates['" + it.key() + "'].arity must be an integer");
      int arity = it.value().at("arity").get<int>();
      if (arity == 0) {
        I.signature.declare_proposition(it.key());
        const Json& spec = it.value().at("table");
        if (!spec.is_object() || !spec.contains(""))
          fail(ErrorKind::BadInput, "predicates['" + it.key() + "'].table for arity 0 must map \"\" to a grade");
        PredicateTable table{0, {static_cast<Elem>(decode_grade(spec.at(""), "predicates['" + it.key() + "'].table"))}};
        I.predicates[it.key()] = std::move(table);
        continue;
      }
      I.signature.declare_predicate(it.key(), arity);
      PredicateTable table{arity, {}};
      detail::fill_table(
          it.value().at("table"), "predicates['" + it.key() + "']", I, arity,
          [&](std::vector<int>&& vals) {
            table.values.assign(vals.begin(), vals.end());
          },
          decode_grade);
      I.predicates[it.key()] = std::move(table);
    }
  }
  validate_interpretation(I);
  return I;
}

inline Interpretation read_interpretation_file(const std::string& path) {
  std::filesystem::path p(path);
  return interpretation_from_json(read_json_file(path), p.parent_path().string());
}

inline Json interpretation_to_json(const Interpretation& I) {
  Json j;
  j["frame"] = frame_to_json(I.frame);
  j["domain"] = I.domain;
  Json cs = Json::object();
  for (const auto& [name, d] : I.constants) cs[name] = I.domain[static_cast<std::size_t>(d)];
  j["constants"] = cs;
  auto key_of = [&](int arity, int cell) {
    std::vector<int> tuple(static_cast<std::size_t>(arity));
    int rest = cell;
    for (int k = arity - 1; k >= 0; --k) {
      tuple[static_cast<std::size_t>(k)] = rest % I.domain_size();
      rest /= I.domain_size();
    }
    std::string key;
    for (int k = 0; k < arity; ++k) {
      if (k) key += ",";
      key += I.domain[static_cast<std::size_t>(tuple[static_cast<std::size_t>(k)])];
    }
    return key;
  };
  Json fs = Json::object();
  for (const auto& [name, table] : I.functions) {
    Json t = Json::object();
    for (std::size_t cell = 0; cell < table.values.size(); ++cell)
      t[key_of(table.arity, static_cast<int>(cell))] = I.domain[static_cast<std::size_t>(table.values[cell])];
    fs[name] = Json{{"arity", table.arity}, {"table", t}};
  }
  j["functions"] = fs;
  Json ps = Json::object();
  for (const auto& [name, table] : I.predicates) {
    Json t = Json::object();
    for (std::size_t cell = 0; cell < table.values.size(); ++cell)
      t[key_of(table.arity, static_cast<int>(cell))] = I.frame.id_of(table.values[cell]);
    ps[name] = Json{{"arity", table.arity}, {"table", t}};
  }
  j["predicates"] = ps;
  return j;
}

// Generator files: one formula per line; blank lines and '#' comments skipped.
// Symbols resolve strictly against the given signature.
inline std::vector<Formula> read_generators_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<Formula> out;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    out.push_back(parse_formula(line, sig));
  }
  if (out.empty()) fail(ErrorKind::BadInput, "'" + path + "' contains no formulas");
  return out;
}

// System files:
// {
//   "value_frame": {...},
//   "alg_frame": {...},
//   "points": ["s0", ...],
//   "rel": {"s0": {"algElemId": "gradeId", ...}, ...}
// }
inline TopoSystem system_from_json(const Json& j) {
  detail::require_keys(j, "system", {"value_frame", "alg_frame", "points", "rel"});
  TopoSystem sys;
  sys.value_frame = frame_from_json(j.at("value_frame"));
  sys.alg = frame_from_json(j.at("alg_frame"));
  sys.point_labels = detail::string_list(j.at("points"), "system.points");
  if (sys.point_labels.empty()) fail(ErrorKind::BadInput, "system.points must be nonempty");
  const Json& rel = j.at("rel");
  if (!rel.is_object()) fail(ErrorKind::BadInput, "system.rel must be an object");
  sys.rel.assign(static_cast<std::size_t>(sys.alg.size()), ExtVector(sys.point_labels.size(), -1));
  for (std::size_t x = 0; x < sys.point_labels.size(); ++x) {
    const std::string& label = sys.point_labels[x];
    if (!rel.contains(label)) fail(ErrorKind::BadInput, "system.rel is missing point '" + label + "'");
    const Json& row = rel.at(label);
    if (!row.is_object()) fail(ErrorKind::BadInput, "system.rel['" + label + "'] must be an object");
    for (Elem a = 0; a < sys.alg.size(); ++a) {
      const std::string id = sys.alg.id_of(a);
      if (!row.contains(id))
        fail(ErrorKind::BadInput, "system.rel['" + label + "'] is missing algebra element '" + id + "'");
      if (!row.at(id).is_string())
        fail(ErrorKind::BadInput, "system.rel['" + label + "']['" + id + "'] must be a frame element id");
      sys.rel[static_cast<std::size_t>(a)][x] = sys.value_frame.index_of(row.at(id).get<std::string>());
    }
    if (row.size() != static_cast<std::size_t>(sys.alg.size()))
      fail(ErrorKind::BadInput, "system.rel['" + label + "'] has entries for unknown algebra elements");
  }
  validate_system(sys);
  return sys;
}

inline Json system_to_json(const TopoSystem& sys) {
  Json j;
  j["value_frame"] = frame_to_json(sys.value_frame);
  j["alg_frame"] = frame_to_json(sys.alg);
  j["points"] = sys.point_labels;
  Json rel = Json::object();
  for (std::size_t x = 0; x < sys.point_labels.size(); ++x) {
    Json row = Json::object();
    for (Elem a = 0; a < sys.alg.size(); ++a)
      row[sys.alg.id_of(a)] = sys.value_frame.id_of(sys.rel_at(static_cast<int>(x), a));
    rel[sys.point_labels[x]] = row;
  }
  j["rel"] = rel;
  return j;
}

inline TopoSystem read_system_file(const std::string& path) { return system_from_json(read_json_file(path)); }

// Space files:
// {
//   "value_frame": {...},
//   "points": ["s0", ...],
//   "opens": {"T0": {"s0": "gradeId", ...}, ...}
// }
inline LSpace space_from_json(const Json& j) {
  detail::require_keys(j, "space", {"value_frame", "points", "opens"});
  LSpace sp;
  sp.value_frame = frame_from_json(j.at("value_frame"));
  sp.point_labels = detail::string_list(j.at("points"), "space.points");
  if (sp.point_labels.empty()) fail(ErrorKind::BadInput, "space.points must be nonempty");
  const Json& opens = j.at("opens");
  if (!opens.is_object()) fail(ErrorKind::BadInput, "space.opens must be an object");
  for (auto it = opens.begin(); it != opens.end(); ++it) {
    if (!it.value().is_object()) fail(ErrorKind::BadInput, "space.opens['" + it.key() + "'] must be an object");
    ExtVector v(sp.point_labels.size(), -1);
    for (std::size_t x = 0; x < sp.point_labels.size(); ++x) {
      const std::string& label = sp.point_labels[x];
      if (!it.value().contains(label))
        fail(ErrorKind::BadInput, "space.opens['" + it.key() + "'] is missing point '" + label + "'");
      if (!it.value().at(label).is_string())
        fail(ErrorKind::BadInput, "space.opens['" + it.key() + "']['" + label + "'] must be a frame element id");
      v[x] = sp.value_frame.index_of(it.value().at(label).get<std::string>());
    }
    if (it.value().size() != sp.point_labels.size())
      fail(ErrorKind::BadInput, "space.opens['" + it.key() + "'] has entries for unknown points");
    sp.open_names.push_back(it.key());
    sp.opens.push_back(std::move(v));
  }
  if (sp.opens.empty()) fail(ErrorKind::BadInput, "space.opens must be nonempty");
  return sp;
}

inline Json space_to_json(const LSpace& sp) {
  Json j;
  j["value_frame"] = frame_to_json(sp.value_frame);
  j["points"] = sp.point_labels;
  Json opens = Json::object();
  for (std::size_t i = 0; i < sp.opens.size(); ++i) {
    Json row = Json::object();
    for (std::size_t x = 0; x < sp.point_labels.size(); ++x)
      row[sp.point_labels[x]] = sp.value_frame.id_of(sp.opens[i][x]);
    opens[sp.open_names[i]] = row;
  }
  j["opens"] = opens;
  return j;
}

inline LSpace read_space_file(const std::string& path) { return space_from_json(read_json_file(path)); }

// Theory files: a '# policy:' header, a '# propositions:' header, then one
// sequent per line.
inline std::string theory_to_text(const PropTheory& theory) {
  std::string out = "# policy: ";
  out += theory.full_policy ? "full" : "bounded";
  out += "\n# propositions:";
  for (const std::string& p : theory.propositions) out += " " + p;
  out += "\n";
  for (const Sequent& ax : theory.axioms) out += to_text(ax) + "\n";
  return out;
}

inline PropTheory theory_from_text(const std::string& text) {
  PropTheory out;
  std::istringstream in(text);
  std::string line;
  bool saw_policy = false, saw_props = false;
  Signature sig;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::istringstream hdr(line.substr(start + 1));
      std::string word;
      hdr >> word;
      if (word == "policy:") {
        std::string policy;
        hdr >> policy;
        if (policy != "full" && policy != "bounded")
          fail(ErrorKind::BadInput, "theory policy must be 'full' or 'bounded', got '" + policy + "'");
        out.full_policy = policy == "full";
        saw_policy = true;
      } else if (word == "propositions:") {
        std::string p;
        while (hdr >> p) {
          sig.declare_proposition(p);
          out.propositions.push_back(p);
        }
        saw_props = true;
      } else {
        fail(ErrorKind::BadInput, "unknown theory header '# " + word + "'");
      }
      continue;
    }
    out.axioms.push_back(parse_sequent(line, sig));
  }
  if (!saw_policy) fail(ErrorKind::BadInput, "theory file is missing the '# policy:' header");
  if (!saw_props) fail(ErrorKind::BadInput, "theory file is missing the '# propositions:' header");
  return out;
}

inline PropTheory read_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return theory_from_text(buf.str());
}

// Derivation files:
// {"nodes": [{"rule": "R1", "premises": [0, 1], "conclusion": "p(x1) |- p(x1)",
//             "witnesses": {"S": [...], "subst": [[2, 1]], "x": 1, "y": 2}}]}
// One shared inferring signature covers every formula in the file.
inline Derivation derivation_from_json(const Json& j) {
  detail::require_keys(j, "derivation", {"nodes"});
  if (!j.at("nodes").is_array()) fail(ErrorKind::BadInput, "derivation.nodes must be an array");
  Derivation d;
  Signature sig;
  int idx = 0;
  for (const Json& nj : j.at("nodes")) {
    const std::string what = "derivation.nodes[" + std::to_string(idx++) + "]";
    detail::require_keys(nj, what, {"rule", "conclusion"}, {"premises", "witnesses"});
    Derivation::Node node;
    if (!nj.at("rule").is_string()) fail(ErrorKind::BadInput, what + ".rule must be a string");
    std::optional<RuleId> rule = rule_from_string(nj.at("rule").get<std::string>());
    if (!rule) fail(ErrorKind::BadInput, what + ".rule names no inference rule: '" + nj.at("rule").get<std::string>() + "'");
    node.rule = *rule;
    if (!nj.at("conclusion").is_string()) fail(ErrorKind::BadInput, what + ".conclusion must be a string");
    node.conclusion = parse_sequent_inferring(nj.at("conclusion").get<std::string>(), sig);
    if (nj.contains("premises")) {
      if (!nj.at("premises").is_array()) fail(ErrorKind::BadInput, what + ".premises must be an array");
      for (const Json& p : nj.at("premises")) {
        if (!p.is_number_integer()) fail(ErrorKind::BadInput, what + ".premises must contain node indices");
        node.children.push_back(p.get<int>());
      }
    }
    if (nj.contains("witnesses")) {
      const Json& wj = nj.at("witnesses");
      detail::require_keys(wj, what + ".witnesses", {}, {"S", "subst", "x", "y"});
      if (wj.contains("S"))
        for (const std::string& text : detail::string_list(wj.at("S"), what + ".witnesses.S"))
          node.witnesses.set_members.push_back(parse_formula_inferring(text, sig));
      if (wj.contains("subst")) {
        if (!wj.at("subst").is_array()) fail(ErrorKind::BadInput, what + ".witnesses.subst must be an array of pairs");
        for (const Json& p : wj.at("subst")) {
          if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            fail(ErrorKind::BadInput, what + ".witnesses.subst entries must be [target, replacement] variable indices");
          node.witnesses.subst_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
        }
      }
      if (wj.contains("x")) {
        if (!wj.at("x").is_number_integer()) fail(ErrorKind::BadInput, what + ".witnesses.x must be an integer");
        node.witnesses.var_x = wj.at("x").get<int>();
      }
      if (wj.contains("y")) {
        if (!wj.at("y").is_number_integer()) fail(ErrorKind::BadInput, what + ".witnesses.y must be an integer");
        node.witnesses.var_y = wj.at("y").get<int>();
      }
    }
    d.nodes.push_back(std::move(node));
  }
  return d;
}

inline Derivation read_derivation_file(const std::string& path) { return derivation_from_json(read_json_file(path)); }

}  // namespace geolog
