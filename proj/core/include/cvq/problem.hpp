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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cvq/types.hpp"

namespace cvq {

/// A builtin family reference: catalog name plus numeric parameters.
struct BuiltinFamilySpec {
  std::string name;
  std::map<std::string, double> params;

  bool operator==(const BuiltinFamilySpec&) const = default;
};

/// An explicit family given as per-coupling operator tables: operators[i] is
/// the full outcome list {M_j(g_i)}. Only defined at the tabulated couplings.
struct TableFamilySpec {
  std::vector<double> g;
  std::vector<std::vector<Mat>> operators;

  bool operator==(const TableFamilySpec& other) const;
};

using FamilySpec = std::variant<BuiltinFamilySpec, TableFamilySpec>;

/// A tabulated custom solution: alpha[i] are the contextual values at g[i].
struct CustomSolutionTable {
  std::vector<double> g;
  std::vector<RealVec> alpha;

  bool operator==(const CustomSolutionTable& other) const;
};

/// Solver selection: a builtin method, a named closed-form solution from the
/// family catalog ("custom:parrott"), or an explicit table.
struct SolverSpec {
  enum class Kind { PseudoInverse, MinVariance, CustomNamed, CustomTable };

  Kind kind = Kind::PseudoInverse;
  std::string label;          ///< CustomNamed only
  CustomSolutionTable table;  ///< CustomTable only

  bool operator==(const SolverSpec&) const = default;
};

/// A full problem statement, as carried by a JSON document. Wire format:
/// complex numbers are [re, im] pairs, matrices are row-major (arrays of rows
/// of pairs), vectors are arrays of pairs. Fields observable/state/postselect
/// and grid are optional here; each command checks for what it needs at
/// execution time.
struct ProblemSpec {
  FamilySpec family = BuiltinFamilySpec{"version1", {}};
  std::optional<Mat> observable;
  std::optional<Mat> state;
  std::optional<CVec> postselect;
  SolverSpec solver;
  std::optional<std::vector<double>> grid;  ///< strictly descending, > 0

  bool operator==(const ProblemSpec& other) const;
};

/// Parses and validates a JSON problem document. Collects every violated
/// field into one ParseError rather than stopping at the first.
ProblemSpec parse_problem(const std::string& document);

/// Serializes back to the document format; parse_problem is an exact inverse
/// (asserted as a round-trip property in tests).
std::string serialize_problem(const ProblemSpec& spec);

}  // namespace cvq
