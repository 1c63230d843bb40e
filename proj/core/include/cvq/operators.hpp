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

#include "cvq/errors.hpp"
#include "cvq/types.hpp"

namespace cvq {

/// A validated quantum state. Construction only through validate_density,
/// which guarantees: Hermitian (residual <= 1e-12), trace 1 (+/- 1e-12), and
/// positive semidefinite (min eigenvalue >= -1e-10).
class DensityMatrix {
 public:
  const Mat& matrix() const { return rho_; }
  Index dim() const { return rho_.rows(); }

 private:
  friend DensityMatrix validate_density(const Mat& candidate);
  explicit DensityMatrix(Mat rho) : rho_(std::move(rho)) {}

  Mat rho_;
};

/// A rank-one postselection: the normalized vector f and its projector
/// |f><f|. Build with projector_from_vector.
struct Postselection {
  CVec vector;
  Mat projector;

  Index dim() const { return vector.size(); }
};

/// x*y - y*x. Throws DimensionError unless both are square of equal dim.
Mat commutator(const Mat& x, const Mat& y);

/// x*y + y*x. Throws DimensionError unless both are square of equal dim.
Mat anticommutator(const Mat& x, const Mat& y);

/// [D, [D, rho]] for D = diag(d), computed entrywise as
/// (d_i - d_j)^2 * rho_ij. Agrees with the nested commutator exactly and is
/// the hot path for diagonal measurement families.
Mat double_commutator_diagonal(const RealVec& d, const Mat& rho);

/// Normalizes f and returns it with its rank-one projector.
/// Throws DomainError on (numerically) zero input.
Postselection projector_from_vector(const CVec& f);

/// Checks the three state invariants and returns the validated state.
/// Throws StateError naming the violated invariant and its residual.
DensityMatrix validate_density(const Mat& candidate);

}  // namespace cvq
