#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmlab/arith.hpp"
#include "fmlab/census.hpp"
#include "fmlab/decompose.hpp"
#include "fmlab/probes.hpp"
#include "fmlab/report.hpp"
#include "fmlab/selftest.hpp"
#include "fmlab/structure_io.hpp"
#include "fmlab/sunflower.hpp"

namespace fmlab {

// Exit codes: 0 all verifications passed, 1 verification failure (with
// witnesses in the report), 2 usage or input error.
enum ExitCode { exit_ok = 0, exit_verification_failed = 1, exit_usage = 2 };

namespace cli_detail {

inline Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    auto eq = cur.find('=');
    if (eq == std::string::npos) throw InputError("assignment entries look like x=0");
    a[cur.substr(0, eq)] = std::stoi(cur.substr(eq + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else if (!std::isspace((unsigned char)c)) {
      cur += c;
    }
  }
  flush();
  return a;
}

inline std::set<int> parse_element_list(const std::string& text) {
  std::set<int> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.insert(std::stoi(cur));
      cur.clear();
    } else if (!std::isspace((unsigned char)c)) {
      cur += c;
    }
  }
  if (!cur.empty()) out.insert(std::stoi(cur));
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void emit(const nlohmann::json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << dump_report(j);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + out_path + "'");
    f << dump_report(j);
  }
}

inline std::vector<std::string> index_vars(const std::string& base, int len) {
  if (len == 1) return {base};
  std::vector<std::string> v;
  for (int i = 0; i < len; ++i) v.push_back(base + std::to_string(i));
  return v;
}

inline nlohmann::json tuples_json(const std::vector<Tuple>& ts) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : ts) a.push_back(t);
  return a;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  namespace cd = cli_detail;
  CLI::App app{"workbench for finite relations: type partitions, decompositions, probes"};
  app.require_subcommand(1);

  std::string in_path, out_path, delta_path, formula_text, assign_text, a_text;
  std::string emit_model_path, emit_formula_path, family_path, seq_path, mode = "order";
  std::string base_path;
  int k = 1, k2 = 0, lambda0 = -1, m_target = 2, census_n = 1, census_m = 1, arith_n = 2;
  int xlen = 1, ylen = 1, zlen = 0, max_len = 8;
  bool auto_mode = false, do_code = false, do_verify = false, uniform = false, levels = false;
  long long budget = 10'000'000;
  std::uint64_t seed = 0;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula over a structure");
  eval_cmd->add_option("--in", in_path, "structure file")->required();
  eval_cmd->add_option("--formula", formula_text, "formula text")->required();
  eval_cmd->add_option("--assign", assign_text, "free variable assignment, e.g. x=0,y=1");
  eval_cmd->add_option("--out", out_path, "report path (default stdout)");

  auto* analyze_cmd = app.add_subcommand("analyze", "type partitions, bigness, and the"
                                                    " equivalence-defining formula");
  analyze_cmd->add_option("--in", in_path, "structure file")->required();
  analyze_cmd->add_option("--delta", delta_path, "member set file")->required();
  analyze_cmd->add_option("--a", a_text, "explicit parameter set, e.g. 0,1");
  analyze_cmd->add_option("--lambda0", lambda0, "parameter budget (default from file)");
  analyze_cmd->add_option("--budget", budget, "subset budget");
  analyze_cmd->add_option("--out", out_path, "report path");

  auto* dec_cmd = app.add_subcommand("decompose", "binary relation decomposition pipeline");
  dec_cmd->add_option("--in", in_path, "structure file with a binary relation r")->required();
  dec_cmd->add_option("--k", k, "minority threshold");
  dec_cmd->add_option("--k2", k2, "secondary threshold (default k)");
  dec_cmd->add_flag("--auto", auto_mode, "escalate k until the pipeline accepts");
  dec_cmd->add_option("--emit-model", emit_model_path, "write the synthesized model");
  dec_cmd->add_option("--emit-formula", emit_formula_path, "write the defining formula");
  dec_cmd->add_flag("--uniform", uniform, "also emit the selector-constant form when small");
  dec_cmd->add_option("--out", out_path, "report path");

  auto* sun_cmd = app.add_subcommand("sunflower", "delta-system extraction and coding");
  sun_cmd->add_option("--extract", seq_path, "sequence file")->required();
  sun_cmd->add_option("--m", m_target, "target subsequence length")->required();
  sun_cmd->add_flag("--code", do_code, "build the coding bundle");
  sun_cmd->add_flag("--verify", do_verify, "exhaustively check the bundle");
  sun_cmd->add_option("--out", out_path, "report path");

  auto* probe_cmd = app.add_subcommand("probe", "bigness trend over a family of instances");
  probe_cmd->add_option("--family", family_path, "family file")->required();
  probe_cmd->add_option("--delta", delta_path, "member set file")->required();
  probe_cmd->add_option("--budget", budget, "subset budget per instance");
  probe_cmd->add_option("--out", out_path, "report path");

  auto* census_cmd = app.add_subcommand("census", "exact counting thresholds");
  census_cmd->add_option("--n", census_n, "relation arity parameter")->required();
  census_cmd->add_option("--m", census_m, "formula count parameter")->required();
  census_cmd->add_option("--out", out_path, "report path");

  auto* arith_cmd = app.add_subcommand("arith-search", "search for an arithmetic"
                                                       " interpretation over grid copies");
  arith_cmd->add_option("--n", arith_n, "table size (2..4)")->required();
  arith_cmd->add_option("--base", base_path, "structure file whose r is an equivalence");
  arith_cmd->add_option("--budget", budget, "candidate budget");
  arith_cmd->add_option("--out", out_path, "report path");

  auto* cfg_cmd = app.add_subcommand("config-search", "staircase and diagonal configurations");
  cfg_cmd->add_option("--in", in_path, "structure file")->required();
  cfg_cmd->add_option("--formula", formula_text, "pattern formula")->required();
  cfg_cmd->add_option("--mode", mode, "order | matching")
      ->check(CLI::IsMember({"order", "matching"}));
  cfg_cmd->add_option("--xlen", xlen, "left tuple length (order mode)");
  cfg_cmd->add_option("--ylen", ylen, "right tuple length (order mode)");
  cfg_cmd->add_option("--zlen", zlen, "parameter tuple length (matching mode)");
  cfg_cmd->add_option("--max-len", max_len, "length cap");
  cfg_cmd->add_option("--budget", budget, "node budget");
  cfg_cmd->add_flag("--levels", levels, "multi-level variant (matching mode)");
  cfg_cmd->add_option("--out", out_path, "report path");

  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  self_cmd->add_option("--seed", seed, "suite seed (default 0)");
  self_cmd->add_option("--out", out_path, "report path");

  try {
    std::vector<const char*> argv;
    argv.push_back("fmlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*eval_cmd) {
      auto sf = read_structure(load_json_file(in_path));
      auto phi = parse_formula(formula_text);
      auto assign = cd::parse_assignment(assign_text);
      bool value = evaluate(sf.model, phi, assign);
      auto j = report_header("eval");
      j["config"] = {{"in", in_path}, {"formula", formula_text}, {"assign", assign_text}};
      j["result"] = {{"value", value}, {"formula", to_text(phi)}};
      cd::emit(j, out_path, out);
      return exit_ok;
    }

    if (*analyze_cmd) {
      auto sf = read_structure(load_json_file(in_path));
      auto d = parse_delta(cd::read_text_file(delta_path));
      int l0 = lambda0 >= 0 ? lambda0 : sf.params.lambda0;
      l0 = std::min(l0, sf.model.universe.size);
      auto j = report_header("analyze");
      j["config"] = {{"in", in_path}, {"delta", delta_path}, {"lambda0", l0}};
      auto kd = k_delta(sf.model, d, l0, budget);
      j["result"]["k"] = kd.k;
      j["result"]["witness"] = kd.witness;
      j["result"]["exact"] = kd.exact;
      std::set<int> a = a_text.empty() ? std::set<int>(kd.witness.begin(), kd.witness.end())
                                       : cd::parse_element_list(a_text);
      auto part = type_partition(sf.model, d, a);
      j["result"]["parameter_set"] = std::vector<int>(a.begin(), a.end());
      j["result"]["classes"] = part.classes;
      j["result"]["bigness"] = bigness(part);
      auto psi = interpret_equivalence_formula(d, "aset");
      j["result"]["psi"] = to_text(psi);
      auto mm = sf.model.with_predicate("aset", a);
      bool agrees = definable_relation(mm, psi, {"x1", "x2"}).tuples ==
                    pairs_of_partition(part).tuples;
      j["result"]["psi_agrees"] = agrees;
      cd::emit(j, out_path, out);
      return agrees ? exit_ok : exit_verification_failed;
    }

    if (*dec_cmd) {
      auto sf = read_structure(load_json_file(in_path));
      auto rit = sf.model.relation_values.find("r");
      if (rit == sf.model.relation_values.end() || rit->second.arity != 2)
        throw InputError("decompose expects a binary relation named 'r'");
      auto j = report_header("decompose");
      j["config"] = {{"in", in_path}, {"k", k}, {"k2", k2 ? k2 : k}, {"auto", auto_mode}};
      Decomposition dec;
      FormulaPtr phi;
      VerifyResult ver;
      int k_final = k;
      if (auto_mode) {
        auto ar = auto_decompose(sf.model.universe, rit->second);
        dec = std::move(ar.decomposition);
        phi = ar.formula;
        ver = ar.verification;
        k_final = ar.k_final;
        nlohmann::json trail = nlohmann::json::array();
        for (const auto& step : ar.trail)
          trail.push_back({{"k", step.k}, {"outcome", step.outcome}});
        j["result"]["trail"] = std::move(trail);
      } else {
        DecompositionParams p;
        p.k = k;
        p.k2 = k2 ? k2 : k;
        dec = build_simple_decomposition(sf.model.universe, rit->second, p);
        phi = synthesize_defining_formula(dec, rit->second);
        ver = verify_decomposition(dec, phi, rit->second);
      }
      j["result"]["verified"] = ver.exact;
      if (!ver.exact) j["result"]["counterexamples"] = cd::tuples_json(ver.counterexamples);
      j["result"]["stats"] = {{"k", k_final},
                              {"k2", auto_mode ? k_final : (k2 ? k2 : k)},
                              {"l0", dec.stats.l0},
                              {"a_size", dec.stats.a_size},
                              {"a_star_size", dec.stats.a_star_size},
                              {"class_count", dec.stats.class_count},
                              {"piece_count", dec.stats.piece_count},
                              {"atom_count", dec.stats.atom_count},
                              {"positive_types", dec.stats.positive_types}};
      j["result"]["formula"] = to_text(phi);
      if (uniform && dec.stats.atom_count <= 16 && dec.model.universe.size >= 2) {
        auto dec_copy = dec;
        j["result"]["uniform_formula"] = to_text(uniform_defining_formula(dec_copy));
      }
      if (!emit_model_path.empty())
        cd::emit(write_structure(dec.model), emit_model_path, out);
      if (!emit_formula_path.empty()) {
        std::ofstream f(emit_formula_path, std::ios::binary);
        if (!f) throw InputError("cannot write '" + emit_formula_path + "'");
        f << to_text(phi) << "\n";
      }
      cd::emit(j, out_path, out);
      return ver.exact ? exit_ok : exit_verification_failed;
    }

    if (*sun_cmd) {
      auto seq = read_sequence(load_json_file(seq_path));
      auto j = report_header("sunflower");
      j["config"] = {{"extract", seq_path}, {"m", m_target}, {"code", do_code},
                     {"verify", do_verify}};
      j["result"]["bound"] = delta_bound(seq.n, m_target);
      j["result"]["length"] = (int)seq.tuples.size();
      auto ext = extract_delta_system(seq.tuples, m_target);
      j["result"]["found"] = ext.has_value();
      int rc = exit_ok;
      if (ext) {
        j["result"]["indices"] = ext->indices;
        nlohmann::json cp = nlohmann::json::object();
        for (auto [pos, val] : ext->pattern.constant_positions)
          cp[std::to_string(pos)] = val;
        j["result"]["constant_positions"] = std::move(cp);
        j["result"]["injective_positions"] =
            std::vector<int>(ext->pattern.injective_positions.begin(),
                             ext->pattern.injective_positions.end());
        if (do_code || do_verify) {
          std::vector<Tuple> chosen;
          for (int i : ext->indices) chosen.push_back(seq.tuples[i]);
          auto bundle = code_delta_system(Universe{seq.universe}, chosen, ext->pattern);
          j["result"]["codes"] = bundle.codes;
          j["result"]["theta"] = to_text(bundle.theta);
          j["result"]["model"] = write_structure(bundle.model);
          if (do_verify) {
            bool okv = verify_coding(bundle, chosen);
            j["result"]["coding_verified"] = okv;
            if (!okv) rc = exit_verification_failed;
          }
        }
      }
      cd::emit(j, out_path, out);
      return rc;
    }

    if (*probe_cmd) {
      auto fam = read_family(load_json_file(family_path), load_json_file);
      auto d = parse_delta(cd::read_text_file(delta_path));
      auto rep = dichotomy_probe(fam, d, budget);
      auto j = report_header("probe");
      j["config"] = {{"family", family_path}, {"delta", delta_path}};
      nlohmann::json recs = nlohmann::json::array();
      for (const auto& r : rep.records) {
        nlohmann::json rr;
        rr["label"] = r.label;
        rr["size"] = r.size;
        rr["lambda0"] = r.lambda0;
        if (r.error.empty()) {
          rr["k"] = r.k.k;  // a lower bound: only the given member set is examined
          rr["witness"] = r.k.witness;
          rr["exact"] = r.k.exact;
          if (r.decomposed) {
            rr["decomposition"] = {{"k", r.decomposition_k},
                                   {"a_star_size", r.a_star_size},
                                   {"atom_count", r.atom_count}};
          }
        } else {
          rr["error"] = r.error;
        }
        recs.push_back(std::move(rr));
      }
      j["result"]["instances"] = std::move(recs);
      j["result"]["verdict"] = rep.verdict;
      cd::emit(j, out_path, out);
      return exit_ok;
    }

    if (*census_cmd) {
      auto rep = count_census(census_n, census_m);
      auto j = report_header("census");
      j["config"] = {{"n", census_n}, {"m", census_m}};
      j["result"]["relation_least_n"] = rep.relation_least_n;
      j["result"]["relation_lhs"] = rep.relation_lhs;
      j["result"]["relation_rhs"] = rep.relation_rhs;
      if (rep.function_least_n) {
        j["result"]["function_least_n"] = *rep.function_least_n;
        j["result"]["function_lhs"] = rep.function_lhs;
        j["result"]["function_rhs"] = rep.function_rhs;
      }
      j["result"]["threshold_n"] = rep.threshold_n;
      j["result"]["threshold_consistent"] = rep.threshold_consistent;
      cd::emit(j, out_path, out);
      return rep.threshold_consistent ? exit_ok : exit_verification_failed;
    }

    if (*arith_cmd) {
      Partition base;
      if (base_path.empty()) {
        base = selftest_detail::grid_rows(arith_n);
      } else {
        auto sf = read_structure(load_json_file(base_path));
        auto rit = sf.model.relation_values.find("r");
        if (rit == sf.model.relation_values.end())
          throw InputError("base structure needs a relation named 'r'");
        auto p = partition_from_equivalence(rit->second, sf.model.universe);
        if (!p) throw InputError("base relation is not an equivalence");
        base = *p;
      }
      auto res = search_arithmetic_interpretation(base, arith_n, budget);
      auto j = report_header("arith-search");
      j["config"] = {{"n", arith_n}, {"base", base_path}};
      j["result"]["found"] = res.witness.has_value();
      j["result"]["candidates_tried"] = res.candidates_tried;
      j["result"]["exhausted"] = res.exhausted;
      if (res.witness) {
        const auto& w = *res.witness;
        j["result"]["verified"] = res.report.pass;
        j["result"]["representatives"] = res.report.representatives;
        j["result"]["parameters"] = w.parameters;
        nlohmann::json copies = nlohmann::json::array();
        for (const auto& c : w.copies) copies.push_back(c.classes);
        j["result"]["copies"] = std::move(copies);
        for (const auto& [name, f] : w.formulas) j["result"]["formulas"][name] = to_text(f);
      }
      cd::emit(j, out_path, out);
      return res.witness ? exit_ok : exit_verification_failed;
    }

    if (*cfg_cmd) {
      auto sf = read_structure(load_json_file(in_path));
      auto phi = parse_formula(formula_text);
      auto j = report_header("config-search");
      j["config"] = {{"in", in_path}, {"formula", formula_text}, {"mode", mode},
                     {"max_len", max_len}};
      if (mode == "order") {
        auto res = find_order_configuration(sf.model, phi, cd::index_vars("x", xlen),
                                            cd::index_vars("y", ylen), max_len, budget);
        j["result"]["length"] = res.length;
        j["result"]["exact"] = res.exact;
        j["result"]["a_seq"] = cd::tuples_json(res.a_seq);
        j["result"]["b_seq"] = cd::tuples_json(res.b_seq);
      } else if (levels) {
        auto res = find_matching_levels(sf.model, phi,
                                        zlen ? cd::index_vars("z", zlen)
                                             : std::vector<std::string>{},
                                        max_len, budget);
        j["result"]["levels"] = res.levels;
        j["result"]["exact"] = res.exact;
        j["result"]["params"] = cd::tuples_json(res.params);
      } else {
        auto res = find_matching_configuration(sf.model, phi,
                                               zlen ? cd::index_vars("z", zlen)
                                                    : std::vector<std::string>{},
                                               max_len, budget);
        j["result"]["length"] = res.length;
        j["result"]["exact"] = res.exact;
        j["result"]["params"] = res.params;
        j["result"]["a_seq"] = cd::tuples_json(res.a_seq);
        j["result"]["b_seq"] = cd::tuples_json(res.b_seq);
      }
      cd::emit(j, out_path, out);
      return exit_ok;
    }

    if (*self_cmd) {
      nlohmann::json body;
      auto results = run_selftest(seed, &body);
      auto j = report_header("selftest");
      j["config"] = {{"seed", seed}};
      j["result"]["criteria"] = body;
      bool all = true;
      nlohmann::json extra = nlohmann::json::array();
      for (const auto& c : results) {
        if (!c.pass) all = false;
        if (c.id == 11) {
          extra.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}});
        }
      }
      j["result"]["determinism"] = std::move(extra);
      j["result"]["all_pass"] = all;
      cd::emit(j, out_path, out);
      return all ? exit_ok : exit_verification_failed;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_verification_failed;
  }
  return exit_usage;
}

}  // namespace fmlab
