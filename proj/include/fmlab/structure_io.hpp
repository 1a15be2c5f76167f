#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmlab/error.hpp"
#include "fmlab/probes.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

using Json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw InputError("unknown key '" + it.key() + "' in " + where);
}

inline int element_in(const Json& j, int size, const std::string& where) {
  if (!j.is_number_integer()) throw InputError("expected an element in " + where);
  int e = j.get<int>();
  if (e < 0 || e >= size) throw InputError("element out of range in " + where);
  return e;
}

}  // namespace detail

struct StructureFile {
  SimpleModel model;
  AnalysisParams params;
  bool lambda_given = false;
};

// {"universe": N, "relations":[{"name","arity","tuples"}], "predicates":
//  [{"name","elements"}], "functions":[{"name","pairs"}], "constants":{...},
//  "lambda0": K, "lambda1": K}. Unknown keys are rejected.
inline StructureFile read_structure(const Json& j) {
  detail::reject_unknown_keys(
      j, {"universe", "relations", "predicates", "functions", "constants", "lambda0", "lambda1"},
      "structure");
  if (!j.contains("universe") || !j["universe"].is_number_integer())
    throw InputError("structure needs an integer 'universe'");
  StructureFile out;
  SimpleModel& m = out.model;
  m.universe.size = j["universe"].get<int>();
  if (m.universe.size < 1) throw InputError("universe must have at least one element");

  if (j.contains("relations")) {
    for (const auto& r : j["relations"]) {
      detail::reject_unknown_keys(r, {"name", "arity", "tuples"}, "relation");
      std::string name = r.at("name").get<std::string>();
      int arity = r.at("arity").get<int>();
      std::set<Tuple> tuples;
      for (const auto& t : r.at("tuples")) {
        Tuple tup;
        for (const auto& e : t) tup.push_back(detail::element_in(e, m.universe.size, name));
        if ((int)tup.size() != arity) throw InputError("tuple arity mismatch in '" + name + "'");
        tuples.insert(std::move(tup));
      }
      m.vocabulary.relation_symbols.emplace_back(name, arity);
      m.relation_values[name] = RelationTable(arity, std::move(tuples));
    }
  }
  if (j.contains("predicates")) {
    for (const auto& p : j["predicates"]) {
      detail::reject_unknown_keys(p, {"name", "elements"}, "predicate");
      std::string name = p.at("name").get<std::string>();
      std::set<int> elems;
      for (const auto& e : p.at("elements"))
        elems.insert(detail::element_in(e, m.universe.size, name));
      m.vocabulary.unary_predicates.push_back(name);
      m.predicate_values[name] = std::move(elems);
    }
  }
  if (j.contains("functions")) {
    for (const auto& f : j["functions"]) {
      detail::reject_unknown_keys(f, {"name", "pairs"}, "function");
      std::string name = f.at("name").get<std::string>();
      PartialInjection pi;
      for (const auto& pr : f.at("pairs")) {
        if (!pr.is_array() || pr.size() != 2) throw InputError("bad pair in '" + name + "'");
        int s = detail::element_in(pr[0], m.universe.size, name);
        int t = detail::element_in(pr[1], m.universe.size, name);
        if (pi.pairs.count(s)) throw InputError("duplicate source in '" + name + "'");
        pi.pairs[s] = t;
      }
      m.vocabulary.unary_functions.push_back(name);
      m.function_values[name] = std::move(pi);
    }
  }
  if (j.contains("constants")) {
    for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it) {
      m.vocabulary.constants.push_back(it.key());
      m.constant_values[it.key()] = detail::element_in(it.value(), m.universe.size, it.key());
    }
  }
  m.check();

  out.params = AnalysisParams::defaults_for(m.universe);
  if (j.contains("lambda0")) {
    out.params.lambda0 = j["lambda0"].get<int>();
    out.lambda_given = true;
  }
  if (j.contains("lambda1")) {
    out.params.lambda1 = j["lambda1"].get<int>();
    out.lambda_given = true;
  }
  if (out.params.lambda0 < 0 || out.params.lambda1 < 0)
    throw InputError("lambda bounds must be nonnegative");
  if (out.params.lambda0 > m.universe.size)
    throw InputError("lambda0 exceeds the universe size");
  return out;
}

inline Json write_structure(const SimpleModel& m, const std::optional<AnalysisParams>& p = {}) {
  Json j;
  j["universe"] = m.universe.size;
  if (!m.vocabulary.relation_symbols.empty()) {
    Json rels = Json::array();
    for (const auto& [name, arity] : m.vocabulary.relation_symbols) {
      Json r;
      r["name"] = name;
      r["arity"] = arity;
      Json tuples = Json::array();
      for (const auto& t : m.relation_values.at(name).tuples) tuples.push_back(t);
      r["tuples"] = std::move(tuples);
      rels.push_back(std::move(r));
    }
    j["relations"] = std::move(rels);
  }
  if (!m.vocabulary.unary_predicates.empty()) {
    Json preds = Json::array();
    for (const auto& name : m.vocabulary.unary_predicates) {
      Json p_;
      p_["name"] = name;
      p_["elements"] = std::vector<int>(m.predicate_values.at(name).begin(),
                                        m.predicate_values.at(name).end());
      preds.push_back(std::move(p_));
    }
    j["predicates"] = std::move(preds);
  }
  if (!m.vocabulary.unary_functions.empty()) {
    Json funcs = Json::array();
    for (const auto& name : m.vocabulary.unary_functions) {
      Json f;
      f["name"] = name;
      Json pairs = Json::array();
      for (auto [s, t] : m.function_values.at(name).pairs) pairs.push_back(Json::array({s, t}));
      f["pairs"] = std::move(pairs);
      funcs.push_back(std::move(f));
    }
    j["functions"] = std::move(funcs);
  }
  if (!m.vocabulary.constants.empty()) {
    Json consts = Json::object();
    for (const auto& name : m.vocabulary.constants) consts[name] = m.constant_values.at(name);
    j["constants"] = std::move(consts);
  }
  if (p) {
    j["lambda0"] = p->lambda0;
    j["lambda1"] = p->lambda1;
  }
  return j;
}

// {"n": N, "tuples": [[..]..], "universe": optional}
struct SequenceFile {
  int n = 0;
  std::vector<Tuple> tuples;
  int universe = 0;
};

inline SequenceFile read_sequence(const Json& j) {
  detail::reject_unknown_keys(j, {"n", "tuples", "universe"}, "sequence");
  SequenceFile s;
  s.n = j.at("n").get<int>();
  if (s.n < 1) throw InputError("sequence needs n >= 1");
  int max_elem = -1;
  for (const auto& t : j.at("tuples")) {
    Tuple tup;
    for (const auto& e : t) {
      if (!e.is_number_integer() || e.get<int>() < 0)
        throw InputError("sequence elements must be nonnegative integers");
      tup.push_back(e.get<int>());
      max_elem = std::max(max_elem, tup.back());
    }
    if ((int)tup.size() != s.n) throw InputError("tuple length differs from n");
    s.tuples.push_back(std::move(tup));
  }
  s.universe = std::max(max_elem + 1, s.n + 1);
  if (j.contains("universe")) {
    s.universe = j["universe"].get<int>();
    if (s.universe <= max_elem) throw InputError("universe smaller than the sequence elements");
    if (s.universe <= s.n) throw InputError("universe must exceed n");
  }
  return s;
}

// {"instances":[{"generator","size"} | {"file"}], "lambda0": expr,
//  "lambda1": expr, "p_num","p_den", "seed"}
inline FamilyDescriptor read_family(const Json& j,
                                    const std::function<Json(const std::string&)>& load_file) {
  detail::reject_unknown_keys(j, {"instances", "lambda0", "lambda1", "p_num", "p_den", "seed"},
                              "family");
  FamilyDescriptor fam;
  if (j.contains("lambda0")) {
    fam.lambda0_expr =
        j["lambda0"].is_number_integer() ? std::to_string(j["lambda0"].get<int>())
                                         : j["lambda0"].get<std::string>();
  }
  if (j.contains("lambda1")) {
    fam.lambda1_expr =
        j["lambda1"].is_number_integer() ? std::to_string(j["lambda1"].get<int>())
                                         : j["lambda1"].get<std::string>();
  }
  if (j.contains("seed")) fam.seed = j["seed"].get<std::uint64_t>();
  std::uint64_t p_num = 1, p_den = 2;
  if (j.contains("p_num")) p_num = j["p_num"].get<std::uint64_t>();
  if (j.contains("p_den")) p_den = j["p_den"].get<std::uint64_t>();
  for (const auto& inst : j.at("instances")) {
    detail::reject_unknown_keys(inst, {"generator", "size", "file", "lambda0"}, "instance");
    FamilyInstance fi;
    if (inst.contains("file")) {
      std::string path = inst["file"].get<std::string>();
      auto sf = read_structure(load_file(path));
      fi.label = path;
      fi.size = sf.model.universe.size;
      fi.model = std::move(sf.model);
      if (sf.lambda_given) fi.lambda0_override = sf.params.lambda0;
    } else {
      GeneratorSpec g;
      g.name = inst.at("generator").get<std::string>();
      g.p_num = p_num;
      g.p_den = p_den;
      fi.size = inst.at("size").get<int>();
      fi.label = g.name + "-" + std::to_string(fi.size);
      fi.generator = std::move(g);
    }
    if (inst.contains("lambda0")) fi.lambda0_override = inst["lambda0"].get<int>();
    fam.instances.push_back(std::move(fi));
  }
  return fam;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace fmlab
