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

#include <span>
#include <utility>
#include <vector>

#include "cvq/measurement.hpp"
#include "cvq/operators.hpp"
#include "cvq/types.hpp"

namespace cvq {

/// A Hermitian observable (residual <= 1e-12, checked at construction).
class Observable {
 public:
  explicit Observable(Mat a);

  /// Convenience constructor for diag(d).
  static Observable diagonal(const RealVec& d);

  const Mat& matrix() const { return a_; }
  Index dim() const { return a_.rows(); }

  /// True when every off-diagonal entry is <= tol in magnitude.
  bool is_diagonal(double tolerance = tol::diagonality) const;

  /// The eigenvalues read off the diagonal. Throws DomainError when the
  /// matrix is not diagonal (diagonalize first; this library works in the
  /// simultaneously-diagonal basis).
  RealVec diagonal_values() const;

 private:
  Mat a_;
};

/// The linear system F alpha = a defining contextual values: F[m][j] is the
/// m-th diagonal entry of POVM element E_j and a_m the m-th observable
/// eigenvalue, everything expressed in the common eigenbasis.
struct CvProblem {
  RealMat f_matrix;  ///< dim x n_outcomes
  RealVec target;    ///< observable eigenvalues, length dim
  double source_g = 0.0;
};

enum class CvMethod { PseudoInverse, MinVariance, Custom };

/// A vector of contextual values alpha with its method tag and the absolute
/// residual ||F alpha - a||_2. Solutions produced by this module satisfy the
/// scale-relative solvability gate (see solve_pinv).
struct CvSolution {
  RealVec alpha;
  CvMethod method;
  double residual = 0.0;
};

/// Moments of the contextual values under an outcome distribution p:
/// mean = sum_j p_j alpha_j, second_moment = sum_j p_j alpha_j^2,
/// variance = second_moment - mean^2, and two a-priori upper bounds on the
/// second moment: bound_dstar = sqrt(sum alpha^4) and bound_star = sum alpha^2.
struct CvStatistics {
  double mean;
  double second_moment;
  double variance;
  double bound_star;
  double bound_dstar;
};

/// Result of a least-squares quadratic fit v(g) ~ c0 + c1 g + c2 g^2.
struct QuadraticFit {
  double constant;       ///< fitted c0, the g -> 0 limit estimate
  double residual_norm;  ///< 2-norm of the fit residual
};

/// Builds the contextual-value system from a POVM and an observable. Requires
/// every E_j and A to be diagonal in the common basis (max off-diagonal
/// magnitude <= 1e-12); throws DomainError telling the caller to diagonalize
/// otherwise, and DimensionError on dimension mismatch.
CvProblem build_cv_problem(const PovmSet& povm, const Observable& observable);

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// 1e-12 * sigma_max are treated as zero. Satisfies the four Penrose
/// conditions to ~1e-10 for well-scaled inputs (asserted in tests).
RealMat pseudo_inverse(const RealMat& f);

/// Orthonormal basis of the null space of f (right singular vectors whose
/// singular values fall below the rank cutoff). Empty when f is injective;
/// n vectors when f is the n-column zero matrix.
std::vector<RealVec> nullspace_basis(const RealMat& f);

/// The least-Euclidean-norm contextual values alpha = F^+ a. Throws
/// SolveError ("no exact contextual values exist") when the residual exceeds
/// the solvability gate 1e-9 * (1 + ||F||_F ||alpha|| + ||a||); the relative
/// form is what keeps the gate meaningful when alpha grows like 1/g^2.
CvSolution solve_pinv(const CvProblem& problem);

/// Contextual values minimizing the p-weighted second moment
/// sum_j p_j alpha_j^2 subject to F alpha = a, via
/// alpha = W^{-1/2} (F W^{-1/2})^+ a with W = diag(max(p_j, 1e-15)). The
/// weight floor makes zero-probability outcomes cost (almost) nothing while
/// keeping the construction well posed; among the zero-weight freedom the
/// least-Euclidean-norm completion is selected in the floor -> 0 limit.
/// Throws DomainError unless p is a probability vector (entries >= -1e-12,
/// sum = 1 +/- 1e-10) and SolveError when the system is unsolvable.
CvSolution solve_minvar(const CvProblem& problem, const RealVec& probabilities);

/// First-order optimality residual for the weighted problem: the norm of the
/// projection of (p_1 alpha_1, ..., p_n alpha_n) onto Null(F). Zero (<= 1e-9)
/// for true minimizers; O(1) for generic non-minimizing solutions.
double necessary_condition_residual(const CvProblem& problem,
                                    const CvSolution& solution,
                                    const RealVec& probabilities);

/// Moments and bounds of alpha under p. Throws DomainError unless p is a
/// probability vector of matching length.
CvStatistics cv_statistics(const RealVec& alpha, const RealVec& probabilities);

/// Least-squares quadratic fit of v against {1, g, g^2} (computed on the
/// rescaled variable g / g_max for conditioning; the constant is unaffected).
/// Requires >= 4 samples, g > 0, and >= 3 distinct g values; throws
/// DomainError on a degenerate grid.
QuadraticFit quadratic_limit_fit(
    std::span<const std::pair<double, double>> samples);

/// lim_{g->0} g^power * value(g), estimated by a quadratic fit of
/// g^power * value against {1, g, g^2}. The workhorse for reading divergence
/// rates off a sweep: with value ~ c/g^p + O(g^{1-p}), power = p recovers c.
double fit_leading_order(
    const std::vector<std::pair<double, double>>& samples, int power);

/// The default sweep grid g_k = 1e-2 * 2^-k, k = 0..7 (descending).
std::vector<double> default_sweep_grid();

}  // namespace cvq
