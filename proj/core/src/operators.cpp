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

#include "cvq/operators.hpp"

#include <sstream>

#include "cvq/errors.hpp"

namespace cvq {

namespace {

void require_square_same_dim(const Mat& x, const Mat& y, const char* op) {
  if (x.rows() != x.cols() || y.rows() != y.cols()) {
    std::ostringstream msg;
    msg << op << ": operands must be square (got " << x.rows() << "x"
        << x.cols() << " and " << y.rows() << "x" << y.cols() << ")";
    throw DimensionError(msg.str());
  }
  if (x.rows() != y.rows()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << x.rows() << " vs " << y.rows()
        << ")";
    throw DimensionError(msg.str());
  }
}

}  // namespace

double hermiticity_residual(const Mat& m) {
  return max_abs(m - m.adjoint());
}

double real_trace_product(const Mat& x, const Mat& y) {
  // tr(x y) = sum_ij x_ij y_ji; cwise form avoids the full product.
  return x.cwiseProduct(y.transpose()).sum().real();
}

RealVec hermitian_eigenvalues(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermitian_eigenvalues: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (m + m.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Mat commutator(const Mat& x, const Mat& y) {
  require_square_same_dim(x, y, "commutator");
  return x * y - y * x;
}

Mat anticommutator(const Mat& x, const Mat& y) {
  require_square_same_dim(x, y, "anticommutator");
  return x * y + y * x;
}

Mat double_commutator_diagonal(const RealVec& d, const Mat& rho) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("double_commutator_diagonal: rho must be square");
  }
  if (d.size() != rho.rows()) {
    std::ostringstream msg;
    msg << "double_commutator_diagonal: diagonal length " << d.size()
        << " does not match state dimension " << rho.rows();
    throw DimensionError(msg.str());
  }
  Mat out(rho.rows(), rho.cols());
  for (Index i = 0; i < rho.rows(); ++i) {
    for (Index j = 0; j < rho.cols(); ++j) {
      const double gap = d(i) - d(j);
      out(i, j) = gap * gap * rho(i, j);
    }
  }
  return out;
}

Postselection projector_from_vector(const CVec& f) {
  if (f.size() == 0) {
    throw DimensionError("projector_from_vector: empty vector");
  }
  const double norm = f.norm();
  if (norm <= tol::vanishing) {
    throw DomainError("projector_from_vector: vector has (numerically) zero norm");
  }
  Postselection post;
  post.vector = f / norm;
  post.projector = post.vector * post.vector.adjoint();
  return post;
}

DensityMatrix validate_density(const Mat& candidate) {
  if (candidate.rows() != candidate.cols() || candidate.rows() == 0) {
    std::ostringstream msg;
    msg << "validate_density: expected a non-empty square matrix, got "
        << candidate.rows() << "x" << candidate.cols();
    throw DimensionError(msg.str());
  }

  // Messages are deliberately subject-free: callers prefix the field name
  // ("state: trace 0.9 != 1").
  const double herm = hermiticity_residual(candidate);
  if (herm > tol::hermiticity) {
    std::ostringstream msg;
    msg << "not Hermitian (residual " << herm << " > " << tol::hermiticity
        << ")";
    throw StateError(StateError::Kind::NotHermitian, herm, msg.str());
  }

  const double trace_gap = std::abs(candidate.trace().real() - 1.0) +
                           std::abs(candidate.trace().imag());
  if (trace_gap > tol::unit_trace) {
    std::ostringstream msg;
    msg << "trace " << candidate.trace().real() << " != 1";
    throw StateError(StateError::Kind::TraceNotOne, trace_gap, msg.str());
  }

  const RealVec eigs = hermitian_eigenvalues(candidate);
  const double min_eig = eigs.minCoeff();
  if (min_eig < tol::state_eigenvalue_floor) {
    std::ostringstream msg;
    msg << "not positive semidefinite (min eigenvalue " << min_eig << " < "
        << tol::state_eigenvalue_floor << ")";
    throw StateError(StateError::Kind::NotPositive, min_eig, msg.str());
  }

  return DensityMatrix(candidate);
}

}  // namespace cvq
