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

#include <complex>

#include <Eigen/Dense>

namespace cvq {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;      ///< dense complex matrix, the operator carrier
using CVec = Eigen::VectorXcd;     ///< dense complex vector (kets, postselections)
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances used across the library. These are contracts, not
/// tuning knobs: tests assert behavior at exactly these values.
namespace tol {

/// Max entry magnitude of (X - X^dagger) for X to count as Hermitian.
inline constexpr double hermiticity = 1e-12;
/// |trace - 1| allowed for a density matrix.
inline constexpr double unit_trace = 1e-12;
/// Eigenvalue floor for positive semidefiniteness of states.
inline constexpr double state_eigenvalue_floor = -1e-10;
/// Eigenvalue floor for measurement operators.
inline constexpr double measurement_eigenvalue_floor = -1e-10;
/// Max entry magnitude of (sum_j M_j^dagger M_j - I).
inline constexpr double completeness = 1e-12;
/// Singular values below cutoff * sigma_max are treated as zero.
inline constexpr double svd_rank_cutoff = 1e-12;
/// Relative solvability gate for contextual-value solutions; see solve_pinv.
inline constexpr double solution_residual = 1e-9;
/// Floor applied to outcome-probability weights in the min-variance solver.
inline constexpr double weight_floor = 1e-15;
/// Probabilities and denominators at or below this are treated as vanishing.
inline constexpr double vanishing = 1e-14;
/// Max off-diagonal magnitude for a matrix to count as diagonal.
inline constexpr double diagonality = 1e-12;

}  // namespace tol

/// Largest entry magnitude, 0 for an empty matrix. A template so Eigen
/// expressions bind directly without materializing (and without an ambiguous
/// Mat-vs-RealMat conversion).
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Max entry magnitude of (m - m^dagger).
double hermiticity_residual(const Mat& m);

/// Real part of trace(x * y) without forming the full product.
double real_trace_product(const Mat& x, const Mat& y);

/// Eigenvalues of a (nearly) Hermitian matrix, ascending. The Hermitian part
/// (m + m^dagger)/2 is what gets decomposed.
RealVec hermitian_eigenvalues(const Mat& m);

}  // namespace cvq
