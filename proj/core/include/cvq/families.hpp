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

#include <functional>
#include <map>
#include <string>

#include "cvq/contextual.hpp"
#include "cvq/measurement.hpp"
#include "cvq/types.hpp"

namespace cvq {

/// A builtin worked example: a measurement family, its default observable,
/// and closed-form contextual-value solutions by label. Every closed form
/// solves its contextual-value system on the default sweep grid (asserted in
/// tests via the solvability gate).
struct ExampleCatalogEntry {
  std::string name;
  MeasurementFamily family;
  Observable observable;
  std::map<std::string, std::function<RealVec(double g)>> closed_form_solutions;
};

/// 2x2, three outcomes, domain (0, 0.2]:
///   M_1 = diag(1/2 + g, 1/2 - g),  M_2 = diag(1/2 - g, 1/2 + g),
///   M_3 = sqrt(1/2 - 2 g^2) I,
/// observable diag(a, b). Closed forms:
///   "parrott": alpha_1 = 1/g^2, alpha_2 = 1/g^2 - (a - b)/(2g), alpha_3
///              completing the first system row — a diverging solution whose
///              conditioned average has a finite non-weak-value limit;
///   "pinv":    the least-norm solution, computed numerically.
ExampleCatalogEntry version1_family(double a, double b);

/// 3x3, three outcomes, domain (0, 0.14]:
///   M_1 = diag(sqrt(1/2 + g), sqrt(1/2),     sqrt(1/2 + g))
///   M_2 = diag(sqrt(1/3 + g^2), sqrt(1/3 + g), sqrt(1/3))
///   M_3 = diag(sqrt(1/6 - g - g^2), sqrt(1/6 - g), sqrt(1/6 - g))
/// observable diag(1, 0, 0). The system matrix is invertible at every g in
/// the domain, so the unique solution is also the pseudo-inverse one:
///   "pinv": alpha = ((1 - 6g)/(6g^2), (1 - 6g)/(6g^2), -(5 + 6g)/(6g^2)).
ExampleCatalogEntry dj3x3_family();

/// n copies of I/sqrt(n) on dim dimensions with observable I: the trivial,
/// non-disturbing family. Domain (0, 1]; "pinv": alpha = (1, ..., 1).
ExampleCatalogEntry identity_family(Index dim, int n_outcomes);

/// Catalog lookup by name ("version1", "dj3x3", "identity") with per-family
/// parameters (version1: a, b; identity: dim, n). Unknown names or parameter
/// keys throw DomainError.
ExampleCatalogEntry builtin_family(const std::string& name,
                                   const std::map<std::string, double>& params);

}  // namespace cvq
