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
#include <string>
#include <vector>

#include "cvq/contextual.hpp"
#include "cvq/measurement.hpp"
#include "cvq/operators.hpp"
#include "cvq/types.hpp"

namespace cvq {

/// One point of a conditioned-average sweep, split into its weak part and its
/// anomalous (measurement-disturbance) part:
///   value = weak_term + anomalous_term   (exact by construction)
/// where, with A_g = sum_j alpha_j M_j(g)^2 and P the postselection projector,
///   weak_term      = (1/2) tr(P {A_g, rho}) / denominator
///   anomalous_term = sum_j (alpha_j / 2) tr(P [M_j, [rho, M_j]]) / denominator
///   denominator    = sum_j tr(M_j P M_j rho).
struct ConditionedAverageBreakdown {
  double g;
  double value;
  double weak_term;
  double anomalous_term;
  double denominator;
};

enum class Verdict { ConvergesToWeakValue, Anomalous, Inconclusive };

std::string to_string(Verdict verdict);

/// A g -> 0 extrapolation of the conditioned average, compared against the
/// weak value of the observable.
struct WeakLimitReport {
  std::vector<ConditionedAverageBreakdown> sweep;
  double limit_estimate;     ///< extrapolated lim_{g->0} value(g)
  double limit_uncertainty;  ///< fit-quality estimate (see extrapolate_weak_limit)
  double weak_value;         ///< (1/2) tr(P {A, rho}) / tr(P rho)
  double anomaly_estimate;   ///< limit_estimate - weak_value
  Verdict verdict;
};

/// Produces the contextual values used at each sweep point. The CvProblem
/// carries its coupling in source_g, so closed-form solutions can be wrapped
/// just as easily as numeric solvers.
using CvSolver = std::function<CvSolution(const CvProblem&)>;

/// The (real part of the) weak value of A between rho and the postselection:
/// (1/2) tr(P_f {A, rho}) / tr(P_f rho). Throws DomainError when the
/// postselection overlap tr(P_f rho) <= 1e-14.
double weak_value(const Observable& observable, const DensityMatrix& rho,
                  const Postselection& post);

/// The postselected conditioned average at coupling g, computed through the
/// weak/anomalous split (never through the raw alpha-weighted sum, which
/// cancels catastrophically once alpha ~ 1/g^2). Throws DomainError on a
/// vanishing denominator and DimensionError on mismatched operands.
ConditionedAverageBreakdown conditioned_average(const MeasurementFamily& family,
                                                double g,
                                                const CvSolution& solution,
                                                const DensityMatrix& rho,
                                                const Postselection& post);

/// The anomalous-term generator
///   S(g) = -(1/2) sum_k alpha_k [M_k(g), [M_k(g), rho]],
/// satisfying anomalous_term = tr(P_f S(g)) / denominator. Vanishes entrywise
/// when all M_k commute with rho.
Mat anomalous_matrix_at_g(const MeasurementFamily& family, double g,
                          const CvSolution& solution, const DensityMatrix& rho);

/// Sweeps the conditioned average over grid (>= 4 strictly descending
/// couplings inside the family domain), extrapolates g -> 0 by a quadratic
/// fit, and classifies the result:
///   - limit_estimate: fitted constant term;
///   - limit_uncertainty: max of the fit residual norm, the constant's shift
///     when the finest point is withheld (measured only when >= 5 points
///     leave a refittable remainder), and a 1e-12-scale rounding floor;
///   - verdict: Anomalous iff |anomaly| > max(10 * uncertainty, 1e-6),
///     ConvergesToWeakValue iff |anomaly| <= uncertainty, else Inconclusive.
/// Solver failures are rethrown with the offending g named.
WeakLimitReport extrapolate_weak_limit(const MeasurementFamily& family,
                                       const Observable& observable,
                                       const CvSolver& solver,
                                       const DensityMatrix& rho,
                                       const Postselection& post,
                                       const std::vector<double>& grid);

}  // namespace cvq
