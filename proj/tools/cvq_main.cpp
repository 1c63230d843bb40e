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

// Command-line front end: reads a JSON problem document, applies flag
// overrides, and runs one of the five commands. Reports go to stdout as JSON
// (default) or CSV; errors to stderr with exit status 1; exit status 2 means
// --expect-weak-value was set and the weak-limit verdict was anomalous.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvq/errors.hpp"
#include "cvq/execute.hpp"
#include "cvq/problem.hpp"
#include "cvq/types.hpp"

namespace {

struct CliArgs {
  std::string problem_file;
  std::string family;
  std::vector<std::string> params;
  std::string solver;
  std::string grid;
  std::string state_file;
  std::string postselect_file;
  bool expect_weak_value = false;
  std::string out = "json";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cvq::Error("cannot read file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

cvq::Complex complex_entry(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw cvq::Error(what + ": expected [re, im] pairs of numbers");
  }
  return cvq::Complex(j[0].get<double>(), j[1].get<double>());
}

/// Wire-format matrix (array of rows of [re, im] pairs) from a file.
cvq::Mat matrix_from_file(const std::string& path, const std::string& what) {
  const nlohmann::json doc = nlohmann::json::parse(read_file(path));
  if (!doc.is_array() || doc.empty() || !doc[0].is_array() || doc[0].empty()) {
    throw cvq::Error(what + ": expected a matrix (array of rows of [re, im] "
                            "pairs) in " + path);
  }
  const std::size_t cols = doc[0].size();
  cvq::Mat m(static_cast<cvq::Index>(doc.size()),
             static_cast<cvq::Index>(cols));
  for (std::size_t r = 0; r < doc.size(); ++r) {
    if (!doc[r].is_array() || doc[r].size() != cols) {
      throw cvq::Error(what + ": rows have inconsistent lengths in " + path);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<cvq::Index>(r), static_cast<cvq::Index>(c)) =
          complex_entry(doc[r][c], what);
    }
  }
  return m;
}

/// Wire-format vector (array of [re, im] pairs) from a file.
cvq::CVec vector_from_file(const std::string& path, const std::string& what) {
  const nlohmann::json doc = nlohmann::json::parse(read_file(path));
  if (!doc.is_array() || doc.empty()) {
    throw cvq::Error(what + ": expected an array of [re, im] pairs in " +
                     path);
  }
  cvq::CVec v(static_cast<cvq::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    v(static_cast<cvq::Index>(i)) = complex_entry(doc[i], what);
  }
  return v;
}

/// "g0,r,K" -> the geometric grid g0 * r^{-k}, k = 0..K-1 (descending).
std::vector<double> geometric_grid(const std::string& text) {
  std::vector<std::string> fields;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  double g0 = 0.0;
  double ratio = 0.0;
  long count = 0;
  try {
    if (fields.size() != 3) {
      throw std::invalid_argument("field count");
    }
    g0 = std::stod(fields[0]);
    ratio = std::stod(fields[1]);
    count = std::stol(fields[2]);
  } catch (const std::exception&) {
    throw cvq::Error("--grid: expected g0,r,K (e.g. 1e-2,2,8)");
  }
  if (!(g0 > 0.0) || !(ratio > 1.0) || count < 1 || count > 10000) {
    throw cvq::Error(
        "--grid: need g0 > 0, ratio r > 1, and 1 <= K <= 10000");
  }
  std::vector<double> grid;
  double g = g0;
  for (long k = 0; k < count; ++k) {
    grid.push_back(g);
    g /= ratio;
  }
  return grid;
}

void apply_param_overrides(const CliArgs& args, cvq::ProblemSpec& spec) {
  if (args.params.empty()) {
    return;
  }
  auto* builtin = std::get_if<cvq::BuiltinFamilySpec>(&spec.family);
  if (builtin == nullptr) {
    throw cvq::Error("--param: only builtin families take parameters");
  }
  for (const std::string& item : args.params) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw cvq::Error("--param: expected key=value, got '" + item + "'");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw cvq::Error("--param: value of '" + item.substr(0, eq) +
                       "' is not a number");
    }
    builtin->params[item.substr(0, eq)] = value;
  }
}

void apply_solver_override(const CliArgs& args, cvq::ProblemSpec& spec) {
  if (args.solver.empty()) {
    return;
  }
  if (args.solver == "pinv") {
    spec.solver = cvq::SolverSpec{};
    spec.solver.kind = cvq::SolverSpec::Kind::PseudoInverse;
  } else if (args.solver == "minvar") {
    spec.solver = cvq::SolverSpec{};
    spec.solver.kind = cvq::SolverSpec::Kind::MinVariance;
  } else if (args.solver.rfind("custom:", 0) == 0 && args.solver.size() > 7) {
    spec.solver = cvq::SolverSpec{};
    spec.solver.kind = cvq::SolverSpec::Kind::CustomNamed;
    spec.solver.label = args.solver.substr(7);
  } else if (args.solver == "custom") {
    // Keep a custom solver the document already carries.
    if (spec.solver.kind != cvq::SolverSpec::Kind::CustomTable &&
        spec.solver.kind != cvq::SolverSpec::Kind::CustomNamed) {
      throw cvq::Error(
          "--solver custom: needs an alpha table in the problem document, or "
          "a closed-form label like custom:parrott");
    }
  } else {
    throw cvq::Error("--solver: unknown method '" + args.solver +
                     "' (expected pinv, minvar, or custom[:label])");
  }
}

cvq::ProblemSpec build_spec(const CliArgs& args) {
  cvq::ProblemSpec spec;
  if (!args.problem_file.empty()) {
    spec = cvq::parse_problem(read_file(args.problem_file));
  }

  if (!args.family.empty()) {
    spec.family = cvq::BuiltinFamilySpec{args.family, {}};
  }
  apply_param_overrides(args, spec);
  apply_solver_override(args, spec);
  if (!args.grid.empty()) {
    spec.grid = geometric_grid(args.grid);
  }
  if (!args.state_file.empty()) {
    spec.state = matrix_from_file(args.state_file, "state");
  }
  if (!args.postselect_file.empty()) {
    spec.postselect = vector_from_file(args.postselect_file, "postselect");
  }

  // Overrides bypass document validation; one round trip through the parser
  // re-checks every field and reports all diagnostics together.
  return cvq::parse_problem(cvq::serialize_problem(spec));
}

void add_common_options(CLI::App* sub, CliArgs& args) {
  sub->add_option("problem", args.problem_file,
                  "JSON problem document (flags override its fields)")
      ->check(CLI::ExistingFile);
  sub->add_option("--family", args.family,
                  "builtin family name (version1, dj3x3, identity)");
  sub->add_option("--param", args.params,
                  "family parameters as key=value (comma-separated or "
                  "repeated)")
      ->delimiter(',');
  sub->add_option("--solver", args.solver,
                  "pinv | minvar | custom | custom:<label>");
  sub->add_option("--grid", args.grid,
                  "geometric coupling grid g0,r,K: g0*r^-k for k=0..K-1");
  sub->add_option("--state", args.state_file,
                  "density matrix file (rows of [re, im] pairs)")
      ->check(CLI::ExistingFile);
  sub->add_option("--postselect", args.postselect_file,
                  "postselection vector file ([re, im] pairs)")
      ->check(CLI::ExistingFile);
  sub->add_flag("--expect-weak-value", args.expect_weak_value,
                "exit 2 if the weak-limit verdict is anomalous");
  sub->add_option("--out", args.out, "report format (default json)")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "contextual values of generalized quantum measurements: solvers, "
      "conditioned averages, and weak-limit sweeps"};
  app.require_subcommand(1);

  CliArgs args;
  const std::pair<const char*, const char*> commands[] = {
      {"check", "validate family invariants across the coupling grid"},
      {"solve", "contextual values and detector statistics per coupling"},
      {"average", "postselected conditioned average per coupling"},
      {"weaklimit", "sweep g -> 0, extrapolate, and classify the limit"},
      {"bounds", "detector variance and its two bounds per coupling"},
  };
  for (const auto& [name, help] : commands) {
    add_common_options(app.add_subcommand(name, help), args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const cvq::Command command = cvq::command_from_string(sub->get_name());
    const cvq::ProblemSpec spec = build_spec(args);

    cvq::ExecuteOptions options;
    options.expect_weak_value = args.expect_weak_value;
    const cvq::Report report = cvq::execute(spec, command, options);

    std::cout << (args.out == "csv" ? report.csv_text : report.json_text);
    return report.exit_code;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
