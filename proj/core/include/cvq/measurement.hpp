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
#include <utility>
#include <vector>

#include "cvq/operators.hpp"
#include "cvq/types.hpp"

namespace cvq {

/// A one-parameter family of measurement operators {M_j(g)}, j = 1..n, on a
/// coupling-strength domain (0, g_max]. Invariants (enforced at construction
/// by sampling g in {g_max, g_max/10, g_max/100}, and re-checkable at any g
/// via completeness_residual):
///   - every M_j(g) is Hermitian positive semidefinite
///     (min eigenvalue >= -1e-10),
///   - sum_j M_j(g)^dagger M_j(g) = I to within 1e-12 per entry.
class MeasurementFamily {
 public:
  using Evaluator = std::function<std::vector<Mat>(double g)>;

  /// Builds a family from an evaluator; dim and n_outcomes are inferred from
  /// eval(g_max). Throws DomainError if validation fails at a sample point.
  /// validation_points overrides where the invariants are sampled (used for
  /// tabulated families, which are only defined at their table couplings).
  MeasurementFamily(std::string label, double g_max, Evaluator eval,
                    std::vector<double> validation_points = {});

  const std::string& label() const { return label_; }
  Index dim() const { return dim_; }
  int n_outcomes() const { return n_outcomes_; }
  double g_max() const { return g_max_; }

  /// The measurement operators at coupling g. Throws DomainError unless
  /// 0 < g <= g_max, and DimensionError if the evaluator misbehaves.
  std::vector<Mat> operators_at(double g) const;

 private:
  std::string label_;
  double g_max_;
  Evaluator eval_;
  Index dim_ = 0;
  int n_outcomes_ = 0;
};

/// POVM elements E_j = M_j^dagger M_j at a fixed coupling, tagged with the
/// coupling they came from (source_g = 0 means "not from a family sweep").
struct PovmSet {
  std::vector<Mat> elements;
  double source_g = 0.0;

  Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
  int n_outcomes() const { return static_cast<int>(elements.size()); }
};

/// Joint and conditional outcome statistics under postselection.
struct PostselectionStats {
  RealVec joint;        ///< p(j, f) = tr(M_j P_f M_j rho) per outcome
  RealVec conditional;  ///< p(j | f) = joint / success_prob
  double success_prob;  ///< sum_j joint_j
};

/// E_j = M_j(g)^dagger M_j(g) for all outcomes.
PovmSet povm_elements(const MeasurementFamily& family, double g);

/// Max entry magnitude of sum_j E_j - I at coupling g.
double completeness_residual(const MeasurementFamily& family, double g);

/// p_j = tr(E_j rho), clipped into [0, 1]. Sums to 1 up to completeness
/// rounding (~1e-10) by the family invariant.
RealVec outcome_probabilities(const MeasurementFamily& family, double g,
                              const DensityMatrix& rho);

/// The normalized post-measurement state m rho m^dagger / eta and the outcome
/// probability eta = tr(m rho m^dagger). Throws DomainError when the outcome
/// is impossible (eta <= 1e-14).
std::pair<DensityMatrix, double> post_measurement_state(
    const Mat& m, const DensityMatrix& rho);

/// Joint probabilities p(j, f) = tr(M_j P_f M_j rho), the postselection
/// success probability, and the conditional distribution. Throws DomainError
/// when postselection never succeeds (success <= 1e-14).
PostselectionStats postselection_stats(const MeasurementFamily& family,
                                       double g, const DensityMatrix& rho,
                                       const Postselection& post);

/// How far the measurement is from non-disturbing at coupling g:
/// max_j || M_j rho M_j^dagger / eta_j - rho ||_maxabs, skipping impossible
/// outcomes. Throws DomainError if every outcome is impossible.
double weakness_residual(const MeasurementFamily& family, double g,
                         const DensityMatrix& rho);

}  // namespace cvq
