#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/formula.hpp"
#include "fmlab/parser.hpp"

namespace fmlab {

// A formula with a designated split of its variables into object variables
// (the tuple being typed) and parameter variables.
struct SplitFormula {
  FormulaPtr formula;
  std::vector<std::string> object_vars;
  std::vector<std::string> param_vars;

  int object_arity() const { return (int)object_vars.size(); }
  int param_arity() const { return (int)param_vars.size(); }
};

struct DeltaSet {
  std::vector<SplitFormula> members;

  int size() const { return (int)members.size(); }
  int max_param_arity() const {
    int n = 0;
    for (const auto& m : members) n = std::max(n, m.param_arity());
    return n;
  }
};

inline SplitFormula make_split(const std::string& text, std::vector<std::string> object_vars,
                               std::vector<std::string> param_vars) {
  SplitFormula s{parse_formula(text), std::move(object_vars), std::move(param_vars)};
  for (const auto& o : s.object_vars)
    for (const auto& p : s.param_vars)
      if (o == p) throw InputError("object and parameter variables overlap: '" + o + "'");
  return s;
}

namespace detail {
inline std::vector<std::string> split_var_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace((unsigned char)c)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (const auto& v : out)
    if (!is_identifier(v)) throw InputError("bad variable name '" + v + "'");
  return out;
}
}  // namespace detail

// Text form: one member per line, "formula :: objvars ; paramvars",
// e.g. "r(x,y) :: x ; y". Blank lines and '#' comments are skipped.
inline DeltaSet parse_delta(const std::string& text) {
  DeltaSet d;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t sep = line.find("::");
    if (sep == std::string::npos) throw InputError("delta line missing '::': " + line);
    std::string formula = line.substr(0, sep);
    std::string rest = line.substr(sep + 2);
    std::size_t semi = rest.find(';');
    if (semi == std::string::npos) throw InputError("delta line missing ';': " + line);
    d.members.push_back(make_split(formula, detail::split_var_list(rest.substr(0, semi)),
                                   detail::split_var_list(rest.substr(semi + 1))));
  }
  return d;
}

inline std::string delta_to_text(const DeltaSet& d) {
  std::string out;
  for (const auto& m : d.members) {
    out += to_text(m.formula) + " :: ";
    for (std::size_t i = 0; i < m.object_vars.size(); ++i)
      out += (i ? "," : "") + m.object_vars[i];
    out += " ; ";
    for (std::size_t i = 0; i < m.param_vars.size(); ++i)
      out += (i ? "," : "") + m.param_vars[i];
    out += "\n";
  }
  return out;
}

}  // namespace fmlab
