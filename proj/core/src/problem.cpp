// Copyright 2026 The cvq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvq/problem.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "cvq/errors.hpp"
#include "cvq/families.hpp"
#include "cvq/operators.hpp"

namespace cvq {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool mat_equal(const Mat& x, const Mat& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

bool finite_number(const json& j) {
  return j.is_number() && std::isfinite(j.get<double>());
}

/// [re, im] -> complex. Field-level errors are pushed with the given path.
std::optional<Complex> parse_complex(const json& j, const std::string& path,
                                     std::vector<std::string>& issues) {
  if (!j.is_array() || j.size() != 2 || !finite_number(j[0]) ||
      !finite_number(j[1])) {
    issues.push_back(path + ": expected a [re, im] pair of finite numbers");
    return std::nullopt;
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

std::optional<CVec> parse_cvec(const json& j, const std::string& path,
                               std::vector<std::string>& issues) {
  if (!j.is_array() || j.empty()) {
    issues.push_back(path + ": expected a non-empty array of [re, im] pairs");
    return std::nullopt;
  }
  CVec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::ostringstream sub;
    sub << path << "[" << i << "]";
    const auto entry = parse_complex(j[i], sub.str(), issues);
    if (!entry) {
      return std::nullopt;
    }
    v(static_cast<Index>(i)) = *entry;
  }
  return v;
}

/// Row-major: array of rows, each row an array of [re, im] pairs.
std::optional<Mat> parse_mat(const json& j, const std::string& path,
                             std::vector<std::string>& issues) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    issues.push_back(path +
                     ": expected a matrix (array of rows of [re, im] pairs)");
    return std::nullopt;
  }
  const std::size_t cols = j[0].size();
  Mat m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      issues.push_back(path + ": rows have inconsistent lengths");
      return std::nullopt;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::ostringstream sub;
      sub << path << "[" << r << "][" << c << "]";
      const auto entry = parse_complex(j[r][c], sub.str(), issues);
      if (!entry) {
        return std::nullopt;
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = *entry;
    }
  }
  return m;
}

std::optional<std::vector<double>> parse_descending_grid(
    const json& j, const std::string& path,
    std::vector<std::string>& issues) {
  if (!j.is_array() || j.empty()) {
    issues.push_back(path + ": expected a non-empty array of couplings");
    return std::nullopt;
  }
  std::vector<double> grid;
  for (const auto& entry : j) {
    if (!finite_number(entry) || !(entry.get<double>() > 0.0)) {
      issues.push_back(path + ": couplings must be finite and > 0");
      return std::nullopt;
    }
    grid.push_back(entry.get<double>());
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) {
      issues.push_back(path + ": couplings must be strictly descending");
      return std::nullopt;
    }
  }
  return grid;
}

std::optional<FamilySpec> parse_family(const json& doc,
                                       std::vector<std::string>& issues) {
  if (!doc.contains("family")) {
    issues.push_back("family: required field is missing");
    return std::nullopt;
  }
  const json& fam = doc.at("family");

  if (fam.is_string()) {
    BuiltinFamilySpec builtin;
    builtin.name = fam.get<std::string>();
    if (doc.contains("params")) {
      const json& params = doc.at("params");
      if (!params.is_object()) {
        issues.push_back("params: expected an object of numbers");
        return std::nullopt;
      }
      for (const auto& [key, value] : params.items()) {
        if (!finite_number(value)) {
          issues.push_back("params." + key + ": expected a finite number");
          return std::nullopt;
        }
        builtin.params[key] = value.get<double>();
      }
    }
    // Dry-run the catalog so bad names/parameters surface at parse time.
    try {
      builtin_family(builtin.name, builtin.params);
    } catch (const Error& err) {
      issues.push_back(std::string("family: ") + err.what());
      return std::nullopt;
    }
    return FamilySpec(std::move(builtin));
  }

  if (fam.is_object()) {
    if (doc.contains("params")) {
      issues.push_back("params: only builtin families take parameters");
    }
    const auto grid = fam.contains("g")
                          ? parse_descending_grid(fam.at("g"), "family.g", issues)
                          : (issues.push_back("family.g: required for table "
                                              "families"),
                             std::nullopt);
    if (!fam.contains("operators") || !fam.at("operators").is_array()) {
      issues.push_back("family.operators: expected one operator list per "
                       "tabulated coupling");
      return std::nullopt;
    }
    if (!grid) {
      return std::nullopt;
    }
    const json& tables = fam.at("operators");
    if (tables.size() != grid->size()) {
      issues.push_back("family.operators: length must match family.g");
      return std::nullopt;
    }

    TableFamilySpec table;
    table.g = *grid;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      std::ostringstream path;
      path << "family.operators[" << i << "]";
      if (!tables[i].is_array() || tables[i].empty()) {
        issues.push_back(path.str() + ": expected a non-empty operator list");
        return std::nullopt;
      }
      std::vector<Mat> ops;
      for (std::size_t j = 0; j < tables[i].size(); ++j) {
        std::ostringstream sub;
        sub << path.str() << "[" << j << "]";
        const auto m = parse_mat(tables[i][j], sub.str(), issues);
        if (!m) {
          return std::nullopt;
        }
        if (m->rows() != m->cols()) {
          issues.push_back(sub.str() + ": measurement operators must be "
                           "square");
          return std::nullopt;
        }
        ops.push_back(*m);
      }
      table.operators.push_back(std::move(ops));
    }

    const Index dim = table.operators.front().front().rows();
    const std::size_t n = table.operators.front().size();
    for (const auto& ops : table.operators) {
      if (ops.size() != n || ops.front().rows() != dim) {
        issues.push_back("family.operators: outcome count and dimension must "
                         "be the same at every tabulated coupling");
        return std::nullopt;
      }
    }
    return FamilySpec(std::move(table));
  }

  issues.push_back("family: expected a builtin name or a {g, operators} table");
  return std::nullopt;
}

std::optional<SolverSpec> parse_solver(const json& j,
                                       std::vector<std::string>& issues) {
  SolverSpec solver;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "pinv") {
      solver.kind = SolverSpec::Kind::PseudoInverse;
      return solver;
    }
    if (name == "minvar") {
      solver.kind = SolverSpec::Kind::MinVariance;
      return solver;
    }
    if (name.rfind("custom:", 0) == 0 && name.size() > 7) {
      solver.kind = SolverSpec::Kind::CustomNamed;
      solver.label = name.substr(7);
      return solver;
    }
    if (name == "custom") {
      issues.push_back("solver: bare 'custom' needs an alpha table "
                       "({\"custom\": {\"g\": ..., \"alpha\": ...}}) or a "
                       "closed-form label ('custom:parrott')");
      return std::nullopt;
    }
    issues.push_back("solver: unknown method '" + name +
                     "' (expected pinv, minvar, or custom[:label])");
    return std::nullopt;
  }

  if (j.is_object() && j.contains("custom") && j.at("custom").is_object()) {
    const json& table = j.at("custom");
    if (!table.contains("g") || !table.contains("alpha")) {
      issues.push_back("solver.custom: expected fields g and alpha");
      return std::nullopt;
    }
    const auto grid =
        parse_descending_grid(table.at("g"), "solver.custom.g", issues);
    if (!grid) {
      return std::nullopt;
    }
    if (!table.at("alpha").is_array() ||
        table.at("alpha").size() != grid->size()) {
      issues.push_back("solver.custom.alpha: need one contextual-value vector "
                       "per tabulated coupling");
      return std::nullopt;
    }
    solver.kind = SolverSpec::Kind::CustomTable;
    solver.table.g = *grid;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const json& row = table.at("alpha")[i];
      if (!row.is_array() || row.empty()) {
        issues.push_back("solver.custom.alpha: entries must be non-empty "
                         "arrays of numbers");
        return std::nullopt;
      }
      RealVec alpha(static_cast<Index>(row.size()));
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!finite_number(row[k])) {
          issues.push_back("solver.custom.alpha: entries must be finite "
                           "numbers");
          return std::nullopt;
        }
        alpha(static_cast<Index>(k)) = row[k].get<double>();
      }
      solver.table.alpha.push_back(std::move(alpha));
    }
    for (const RealVec& alpha : solver.table.alpha) {
      if (alpha.size() != solver.table.alpha.front().size()) {
        issues.push_back("solver.custom.alpha: vectors must all have the same "
                         "length");
        return std::nullopt;
      }
    }
    return solver;
  }

  issues.push_back("solver: expected 'pinv', 'minvar', 'custom:<label>', or a "
                   "{custom: {g, alpha}} table");
  return std::nullopt;
}

ordered_json complex_to_json(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json mat_to_json(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json cvec_to_json(const CVec& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

}  // namespace

bool TableFamilySpec::operator==(const TableFamilySpec& other) const {
  if (g != other.g || operators.size() != other.operators.size()) {
    return false;
  }
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (operators[i].size() != other.operators[i].size()) {
      return false;
    }
    for (std::size_t j = 0; j < operators[i].size(); ++j) {
      if (!mat_equal(operators[i][j], other.operators[i][j])) {
        return false;
      }
    }
  }
  return true;
}

bool CustomSolutionTable::operator==(const CustomSolutionTable& other) const {
  if (g != other.g || alpha.size() != other.alpha.size()) {
    return false;
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].size() != other.alpha[i].size() || alpha[i] != other.alpha[i]) {
      return false;
    }
  }
  return true;
}

bool ProblemSpec::operator==(const ProblemSpec& other) const {
  const auto opt_mat_equal = [](const std::optional<Mat>& x,
                                const std::optional<Mat>& y) {
    if (x.has_value() != y.has_value()) {
      return false;
    }
    return !x || mat_equal(*x, *y);
  };
  if (!opt_mat_equal(observable, other.observable) ||
      !opt_mat_equal(state, other.state)) {
    return false;
  }
  if (postselect.has_value() != other.postselect.has_value() ||
      (postselect && (postselect->size() != other.postselect->size() ||
                      *postselect != *other.postselect))) {
    return false;
  }
  return family == other.family && solver == other.solver &&
         grid == other.grid;
}

ProblemSpec parse_problem(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& err) {
    throw ParseError({std::string("document: not valid JSON (") + err.what() +
                      ")"});
  }
  if (!doc.is_object()) {
    throw ParseError({"document: expected a JSON object"});
  }

  std::vector<std::string> issues;
  static const char* known_fields[] = {"family",     "params", "observable",
                                       "state",      "solver", "postselect",
                                       "grid"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* field : known_fields) {
      if (key == field) {
        known = true;
        break;
      }
    }
    if (!known) {
      issues.push_back(key + ": unknown field");
    }
  }

  ProblemSpec spec;

  const auto family = parse_family(doc, issues);
  if (family) {
    spec.family = *family;
  }

  if (doc.contains("observable")) {
    const auto m = parse_mat(doc.at("observable"), "observable", issues);
    if (m) {
      if (m->rows() != m->cols()) {
        issues.push_back("observable: must be square");
      } else if (hermiticity_residual(*m) > tol::hermiticity) {
        std::ostringstream msg;
        msg << "observable: not Hermitian (residual "
            << hermiticity_residual(*m) << ")";
        issues.push_back(msg.str());
      } else {
        spec.observable = *m;
      }
    }
  }

  if (doc.contains("state")) {
    const auto m = parse_mat(doc.at("state"), "state", issues);
    if (m) {
      try {
        validate_density(*m);
        spec.state = *m;
      } catch (const Error& err) {
        issues.push_back(std::string("state: ") + err.what());
      }
    }
  }

  if (doc.contains("postselect")) {
    const auto v = parse_cvec(doc.at("postselect"), "postselect", issues);
    if (v) {
      if (v->norm() <= tol::vanishing) {
        issues.push_back("postselect: vector has (numerically) zero norm");
      } else {
        spec.postselect = *v;
      }
    }
  }

  if (doc.contains("solver")) {
    const auto solver = parse_solver(doc.at("solver"), issues);
    if (solver) {
      spec.solver = *solver;
    }
  }

  if (doc.contains("grid")) {
    const auto grid = parse_descending_grid(doc.at("grid"), "grid", issues);
    if (grid) {
      spec.grid = *grid;
    }
  }

  // Cross-field dimension checks, once the pieces parsed individually.
  if (family) {
    Index dim = 0;
    if (const auto* builtin = std::get_if<BuiltinFamilySpec>(&*family)) {
      dim = builtin_family(builtin->name, builtin->params).family.dim();
    } else {
      dim = std::get<TableFamilySpec>(*family).operators.front().front().rows();
    }
    const auto check_dim = [&](const char* field, Index got) {
      if (got != dim) {
        std::ostringstream msg;
        msg << field << ": dimension " << got << " != family dimension "
            << dim;
        issues.push_back(msg.str());
      }
    };
    if (spec.observable) {
      check_dim("observable", spec.observable->rows());
    }
    if (spec.state) {
      check_dim("state", spec.state->rows());
    }
    if (spec.postselect) {
      check_dim("postselect", spec.postselect->size());
    }
    if (const auto* table = std::get_if<TableFamilySpec>(&*family)) {
      if (spec.solver.kind == SolverSpec::Kind::CustomTable &&
          !spec.solver.table.alpha.empty() &&
          spec.solver.table.alpha.front().size() !=
              static_cast<Index>(table->operators.front().size())) {
        issues.push_back("solver.custom.alpha: length does not match the "
                         "family outcome count");
      }
    }
  }

  if (!issues.empty()) {
    throw ParseError(std::move(issues));
  }
  return spec;
}

std::string serialize_problem(const ProblemSpec& spec) {
  ordered_json doc;

  if (const auto* builtin = std::get_if<BuiltinFamilySpec>(&spec.family)) {
    doc["family"] = builtin->name;
    if (!builtin->params.empty()) {
      ordered_json params;
      for (const auto& [key, value] : builtin->params) {
        params[key] = value;
      }
      doc["params"] = std::move(params);
    }
  } else {
    const auto& table = std::get<TableFamilySpec>(spec.family);
    ordered_json fam;
    fam["g"] = table.g;
    ordered_json all_ops = ordered_json::array();
    for (const auto& ops : table.operators) {
      ordered_json point = ordered_json::array();
      for (const Mat& m : ops) {
        point.push_back(mat_to_json(m));
      }
      all_ops.push_back(std::move(point));
    }
    fam["operators"] = std::move(all_ops);
    doc["family"] = std::move(fam);
  }

  if (spec.observable) {
    doc["observable"] = mat_to_json(*spec.observable);
  }
  if (spec.state) {
    doc["state"] = mat_to_json(*spec.state);
  }
  if (spec.postselect) {
    doc["postselect"] = cvec_to_json(*spec.postselect);
  }

  switch (spec.solver.kind) {
    case SolverSpec::Kind::PseudoInverse:
      doc["solver"] = "pinv";
      break;
    case SolverSpec::Kind::MinVariance:
      doc["solver"] = "minvar";
      break;
    case SolverSpec::Kind::CustomNamed:
      doc["solver"] = "custom:" + spec.solver.label;
      break;
    case SolverSpec::Kind::CustomTable: {
      ordered_json table;
      table["g"] = spec.solver.table.g;
      ordered_json alphas = ordered_json::array();
      for (const RealVec& alpha : spec.solver.table.alpha) {
        ordered_json row = ordered_json::array();
        for (Index i = 0; i < alpha.size(); ++i) {
          row.push_back(alpha(i));
        }
        alphas.push_back(std::move(row));
      }
      table["alpha"] = std::move(alphas);
      doc["solver"] = ordered_json{{"custom", std::move(table)}};
      break;
    }
  }

  if (spec.grid) {
    doc["grid"] = *spec.grid;
  }

  return doc.dump(2) + "\n";
}

}  // namespace cvq
