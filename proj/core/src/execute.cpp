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

#include "cvq/execute.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "cvq/contextual.hpp"
#include "cvq/errors.hpp"
#include "cvq/families.hpp"
#include "cvq/measurement.hpp"
#include "cvq/operators.hpp"
#include "cvq/weaklimit.hpp"

namespace cvq {

namespace {

using nlohmann::ordered_json;

/// Six significant digits, the plotting precision of the CSV tables.
std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Resolved {
  MeasurementFamily family;
  std::optional<Observable> observable;
  std::optional<DensityMatrix> state;
  std::optional<Postselection> post;
  CvSolver solver;
  std::string solver_name;
  std::vector<double> grid;
};

MeasurementFamily table_family(const TableFamilySpec& table) {
  // Tabulated families exist only at their sampled couplings; the evaluator
  // matches g against the table up to relative rounding.
  auto lookup = [table](double g) -> std::vector<Mat> {
    for (std::size_t i = 0; i < table.g.size(); ++i) {
      if (std::abs(g - table.g[i]) <= 1e-12 * std::max(1.0, table.g[i])) {
        return table.operators[i];
      }
    }
    std::ostringstream msg;
    msg << "family defined only at tabulated couplings; no entry at g = " << g;
    throw DomainError(msg.str());
  };
  return MeasurementFamily("table", table.g.front(), std::move(lookup),
                           table.g);
}

CvSolver named_solution_solver(const ExampleCatalogEntry& entry,
                               const std::string& label) {
  const auto found = entry.closed_form_solutions.find(label);
  if (found == entry.closed_form_solutions.end()) {
    std::ostringstream msg;
    msg << "solver: family '" << entry.name
        << "' has no closed-form solution named '" << label << "'";
    throw DomainError(msg.str());
  }
  const auto fn = found->second;
  return [fn](const CvProblem& problem) {
    CvSolution solution;
    solution.alpha = fn(problem.source_g);
    solution.method = CvMethod::Custom;
    solution.residual =
        (problem.f_matrix * solution.alpha - problem.target).norm();
    return solution;
  };
}

CvSolver table_solution_solver(const CustomSolutionTable& table) {
  return [table](const CvProblem& problem) {
    for (std::size_t i = 0; i < table.g.size(); ++i) {
      if (std::abs(problem.source_g - table.g[i]) <=
          1e-12 * std::max(1.0, table.g[i])) {
        if (table.alpha[i].size() != problem.f_matrix.cols()) {
          throw DimensionError(
              "solver: tabulated contextual values do not match the family "
              "outcome count");
        }
        CvSolution solution;
        solution.alpha = table.alpha[i];
        solution.method = CvMethod::Custom;
        solution.residual =
            (problem.f_matrix * solution.alpha - problem.target).norm();
        return solution;
      }
    }
    std::ostringstream msg;
    msg << "solver: no tabulated contextual values at g = " << problem.source_g;
    throw DomainError(msg.str());
  };
}

Resolved resolve(const ProblemSpec& spec, Command command) {
  std::optional<ExampleCatalogEntry> catalog;
  std::optional<MeasurementFamily> family;
  if (const auto* builtin = std::get_if<BuiltinFamilySpec>(&spec.family)) {
    catalog = builtin_family(builtin->name, builtin->params);
    family = catalog->family;
  } else {
    family = table_family(std::get<TableFamilySpec>(spec.family));
  }

  Resolved resolved{std::move(*family), std::nullopt,       std::nullopt,
                    std::nullopt,       CvSolver{},         "",
                    std::vector<double>{}};

  if (spec.observable) {
    resolved.observable = Observable(*spec.observable);
  } else if (catalog) {
    resolved.observable = catalog->observable;
  } else if (command != Command::Check) {
    throw DomainError(
        "observable: required (table families have no builtin default)");
  }

  if (spec.state) {
    resolved.state = validate_density(*spec.state);
  }
  if (spec.postselect) {
    resolved.post = projector_from_vector(*spec.postselect);
  }

  switch (spec.solver.kind) {
    case SolverSpec::Kind::PseudoInverse:
      resolved.solver = [](const CvProblem& problem) {
        return solve_pinv(problem);
      };
      resolved.solver_name = "pinv";
      break;
    case SolverSpec::Kind::MinVariance: {
      if (!resolved.state) {
        throw DomainError(
            "state: required by the minimum-variance solver (it weights by "
            "outcome probabilities)");
      }
      const MeasurementFamily fam = resolved.family;
      const DensityMatrix rho = *resolved.state;
      resolved.solver = [fam, rho](const CvProblem& problem) {
        const RealVec probs =
            outcome_probabilities(fam, problem.source_g, rho);
        return solve_minvar(problem, probs);
      };
      resolved.solver_name = "minvar";
      break;
    }
    case SolverSpec::Kind::CustomNamed:
      if (!catalog) {
        throw DomainError(
            "solver: closed-form labels exist only for builtin families; "
            "tabulated families take an explicit alpha table");
      }
      resolved.solver = named_solution_solver(*catalog, spec.solver.label);
      resolved.solver_name = "custom:" + spec.solver.label;
      break;
    case SolverSpec::Kind::CustomTable:
      resolved.solver = table_solution_solver(spec.solver.table);
      resolved.solver_name = "custom";
      break;
  }

  if (spec.grid) {
    resolved.grid = *spec.grid;
  } else if (const auto* table = std::get_if<TableFamilySpec>(&spec.family)) {
    resolved.grid = table->g;
  } else {
    resolved.grid = default_sweep_grid();
  }

  return resolved;
}

const DensityMatrix& require_state(const Resolved& resolved, Command command) {
  if (!resolved.state) {
    throw DomainError("state: required by the '" + to_string(command) +
                      "' command");
  }
  return *resolved.state;
}

const Postselection& require_post(const Resolved& resolved, Command command) {
  if (!resolved.post) {
    throw DomainError("postselect: required by the '" + to_string(command) +
                      "' command");
  }
  return *resolved.post;
}

const Observable& require_observable(const Resolved& resolved) {
  if (!resolved.observable) {
    throw DomainError(
        "observable: required (table families have no builtin default)");
  }
  return *resolved.observable;
}

ordered_json sweep_row_json(const ConditionedAverageBreakdown& row) {
  return ordered_json{{"g", row.g},
                      {"value", row.value},
                      {"weak_term", row.weak_term},
                      {"anomalous_term", row.anomalous_term},
                      {"denominator", row.denominator}};
}

std::string sweep_csv(const std::vector<ConditionedAverageBreakdown>& rows) {
  std::ostringstream csv;
  csv << "g,value,weak_term,anomalous_term,denominator\n";
  for (const auto& row : rows) {
    csv << num6(row.g) << ',' << num6(row.value) << ',' << num6(row.weak_term)
        << ',' << num6(row.anomalous_term) << ',' << num6(row.denominator)
        << '\n';
  }
  return csv.str();
}

ordered_json stats_json(const CvStatistics& stats) {
  return ordered_json{{"mean", stats.mean},
                      {"second_moment", stats.second_moment},
                      {"variance", stats.variance},
                      {"bound_star", stats.bound_star},
                      {"bound_dstar", stats.bound_dstar}};
}

Report run_check(const Resolved& resolved) {
  const DensityMatrix& rho = require_state(resolved, Command::Check);

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "g,completeness_residual,min_eigenvalue,weakness_residual\n";
  for (double g : resolved.grid) {
    const double completeness = completeness_residual(resolved.family, g);
    const PovmSet povm = povm_elements(resolved.family, g);
    double min_eig = 0.0;
    for (std::size_t j = 0; j < povm.elements.size(); ++j) {
      const double low = hermitian_eigenvalues(povm.elements[j]).minCoeff();
      min_eig = (j == 0) ? low : std::min(min_eig, low);
    }
    const double weakness = weakness_residual(resolved.family, g, rho);
    rows.push_back(ordered_json{{"g", g},
                                {"completeness_residual", completeness},
                                {"min_eigenvalue", min_eig},
                                {"weakness_residual", weakness}});
    csv << num6(g) << ',' << num6(completeness) << ',' << num6(min_eig) << ','
        << num6(weakness) << '\n';
  }

  ordered_json doc{{"command", "check"},
                   {"family", resolved.family.label()},
                   {"rows", std::move(rows)}};
  return Report{0, doc.dump(2) + "\n", csv.str()};
}

Report run_solve(const Resolved& resolved) {
  const DensityMatrix& rho = require_state(resolved, Command::Solve);
  const Observable& observable = require_observable(resolved);

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  const int n = resolved.family.n_outcomes();
  csv << "g,method,residual,mean,second_moment,variance,bound_star,"
         "bound_dstar";
  for (int j = 1; j <= n; ++j) {
    csv << ",alpha_" << j;
  }
  csv << '\n';

  for (double g : resolved.grid) {
    const PovmSet povm = povm_elements(resolved.family, g);
    const CvProblem problem = build_cv_problem(povm, observable);
    const CvSolution solution = resolved.solver(problem);
    const RealVec probs = outcome_probabilities(resolved.family, g, rho);
    const CvStatistics stats = cv_statistics(solution.alpha, probs);

    ordered_json alpha = ordered_json::array();
    for (Index i = 0; i < solution.alpha.size(); ++i) {
      alpha.push_back(solution.alpha(i));
    }
    rows.push_back(ordered_json{{"g", g},
                                {"method", resolved.solver_name},
                                {"residual", solution.residual},
                                {"alpha", std::move(alpha)},
                                {"statistics", stats_json(stats)}});

    csv << num6(g) << ',' << resolved.solver_name << ','
        << num6(solution.residual) << ',' << num6(stats.mean) << ','
        << num6(stats.second_moment) << ',' << num6(stats.variance) << ','
        << num6(stats.bound_star) << ',' << num6(stats.bound_dstar);
    for (Index i = 0; i < solution.alpha.size(); ++i) {
      csv << ',' << num6(solution.alpha(i));
    }
    csv << '\n';
  }

  ordered_json doc{{"command", "solve"},
                   {"family", resolved.family.label()},
                   {"solver", resolved.solver_name},
                   {"rows", std::move(rows)}};
  return Report{0, doc.dump(2) + "\n", csv.str()};
}

Report run_average(const Resolved& resolved) {
  const DensityMatrix& rho = require_state(resolved, Command::Average);
  const Postselection& post = require_post(resolved, Command::Average);
  const Observable& observable = require_observable(resolved);

  std::vector<ConditionedAverageBreakdown> sweep;
  for (double g : resolved.grid) {
    const PovmSet povm = povm_elements(resolved.family, g);
    const CvProblem problem = build_cv_problem(povm, observable);
    const CvSolution solution = resolved.solver(problem);
    sweep.push_back(conditioned_average(resolved.family, g, solution, rho,
                                        post));
  }

  ordered_json rows = ordered_json::array();
  for (const auto& row : sweep) {
    rows.push_back(sweep_row_json(row));
  }
  ordered_json doc{{"command", "average"},
                   {"family", resolved.family.label()},
                   {"solver", resolved.solver_name},
                   {"weak_value", weak_value(observable, rho, post)},
                   {"rows", std::move(rows)}};
  return Report{0, doc.dump(2) + "\n", sweep_csv(sweep)};
}

Report run_weaklimit(const Resolved& resolved, const ExecuteOptions& options) {
  const DensityMatrix& rho = require_state(resolved, Command::WeakLimit);
  const Postselection& post = require_post(resolved, Command::WeakLimit);
  const Observable& observable = require_observable(resolved);

  const WeakLimitReport report =
      extrapolate_weak_limit(resolved.family, observable, resolved.solver, rho,
                             post, resolved.grid);

  ordered_json rows = ordered_json::array();
  for (const auto& row : report.sweep) {
    rows.push_back(sweep_row_json(row));
  }
  ordered_json doc{{"command", "weaklimit"},
                   {"family", resolved.family.label()},
                   {"solver", resolved.solver_name},
                   {"limit_estimate", report.limit_estimate},
                   {"limit_uncertainty", report.limit_uncertainty},
                   {"weak_value", report.weak_value},
                   {"anomaly_estimate", report.anomaly_estimate},
                   {"verdict", to_string(report.verdict)},
                   {"rows", std::move(rows)}};

  const bool violated =
      options.expect_weak_value && report.verdict == Verdict::Anomalous;
  return Report{violated ? 2 : 0, doc.dump(2) + "\n", sweep_csv(report.sweep)};
}

Report run_bounds(const Resolved& resolved) {
  const DensityMatrix& rho = require_state(resolved, Command::Bounds);
  const Observable& observable = require_observable(resolved);

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "g,mean,second_moment,variance,bound_star,bound_dstar\n";
  for (double g : resolved.grid) {
    const PovmSet povm = povm_elements(resolved.family, g);
    const CvProblem problem = build_cv_problem(povm, observable);
    const CvSolution solution = resolved.solver(problem);
    const RealVec probs = outcome_probabilities(resolved.family, g, rho);
    const CvStatistics stats = cv_statistics(solution.alpha, probs);

    rows.push_back(ordered_json{{"g", g},
                                {"mean", stats.mean},
                                {"second_moment", stats.second_moment},
                                {"variance", stats.variance},
                                {"bound_star", stats.bound_star},
                                {"bound_dstar", stats.bound_dstar}});
    csv << num6(g) << ',' << num6(stats.mean) << ','
        << num6(stats.second_moment) << ',' << num6(stats.variance) << ','
        << num6(stats.bound_star) << ',' << num6(stats.bound_dstar) << '\n';
  }

  ordered_json doc{{"command", "bounds"},
                   {"family", resolved.family.label()},
                   {"solver", resolved.solver_name},
                   {"rows", std::move(rows)}};
  return Report{0, doc.dump(2) + "\n", csv.str()};
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "check") return Command::Check;
  if (name == "solve") return Command::Solve;
  if (name == "average") return Command::Average;
  if (name == "weaklimit") return Command::WeakLimit;
  if (name == "bounds") return Command::Bounds;
  throw DomainError("unknown command '" + name +
                    "' (expected check, solve, average, weaklimit, bounds)");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Check:
      return "check";
    case Command::Solve:
      return "solve";
    case Command::Average:
      return "average";
    case Command::WeakLimit:
      return "weaklimit";
    case Command::Bounds:
      return "bounds";
  }
  throw DomainError("unknown command value");
}

Report execute(const ProblemSpec& spec, Command command,
               const ExecuteOptions& options) {
  const Resolved resolved = resolve(spec, command);
  switch (command) {
    case Command::Check:
      return run_check(resolved);
    case Command::Solve:
      return run_solve(resolved);
    case Command::Average:
      return run_average(resolved);
    case Command::WeakLimit:
      return run_weaklimit(resolved, options);
    case Command::Bounds:
      return run_bounds(resolved);
  }
  throw DomainError("unknown command value");
}

}  // namespace cvq
