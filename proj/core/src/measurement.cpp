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

#include "cvq/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "cvq/errors.hpp"

namespace cvq {

namespace {

Mat sum_of_povm(const std::vector<Mat>& ops) {
  Mat total = Mat::Zero(ops.front().rows(), ops.front().cols());
  for (const Mat& m : ops) {
    total += m.adjoint() * m;
  }
  return total;
}

void validate_operator_set(const std::vector<Mat>& ops, Index dim,
                           const std::string& label, double g) {
  std::ostringstream where;
  where << "measurement family '" << label << "' at g = " << g;

  if (ops.empty()) {
    throw DimensionError(where.str() + ": no measurement operators");
  }
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const Mat& m = ops[j];
    if (m.rows() != dim || m.cols() != dim) {
      std::ostringstream msg;
      msg << where.str() << ": operator " << j + 1 << " is " << m.rows() << "x"
          << m.cols() << ", expected " << dim << "x" << dim;
      throw DimensionError(msg.str());
    }
    if (!m.allFinite()) {
      std::ostringstream msg;
      msg << where.str() << ": operator " << j + 1 << " has non-finite entries";
      throw DomainError(msg.str());
    }
    const double herm = hermiticity_residual(m);
    if (herm > 1e-10) {
      std::ostringstream msg;
      msg << where.str() << ": operator " << j + 1
          << " is not Hermitian (residual " << herm << ")";
      throw DomainError(msg.str());
    }
    const double min_eig = hermitian_eigenvalues(m).minCoeff();
    if (min_eig < tol::measurement_eigenvalue_floor) {
      std::ostringstream msg;
      msg << where.str() << ": operator " << j + 1
          << " is not positive semidefinite (min eigenvalue " << min_eig << ")";
      throw DomainError(msg.str());
    }
  }

  const double completeness =
      max_abs(sum_of_povm(ops) - Mat::Identity(dim, dim));
  if (completeness > tol::completeness) {
    std::ostringstream msg;
    msg << where.str() << ": POVM completeness violated (max |sum E_j - I| = "
        << completeness << " > " << tol::completeness << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

MeasurementFamily::MeasurementFamily(std::string label, double g_max,
                                     Evaluator eval,
                                     std::vector<double> validation_points)
    : label_(std::move(label)), g_max_(g_max), eval_(std::move(eval)) {
  if (!(g_max_ > 0.0) || !std::isfinite(g_max_)) {
    throw DomainError("measurement family '" + label_ +
                      "': g_max must be positive and finite");
  }
  if (!eval_) {
    throw DomainError("measurement family '" + label_ + "': null evaluator");
  }

  const std::vector<Mat> at_max = eval_(g_max_);
  if (at_max.empty() || at_max.front().rows() == 0) {
    throw DimensionError("measurement family '" + label_ +
                         "': evaluator returned no operators");
  }
  dim_ = at_max.front().rows();
  n_outcomes_ = static_cast<int>(at_max.size());

  // Spot-check the family invariants across the domain's decades (or at the
  // caller's points, for families defined only on a table); callers can
  // re-check any specific g through completeness_residual.
  if (validation_points.empty()) {
    validation_points = {g_max_, g_max_ / 10.0, g_max_ / 100.0};
  }
  for (const double g : validation_points) {
    validate_operator_set(eval_(g), dim_, label_, g);
  }
}

std::vector<Mat> MeasurementFamily::operators_at(double g) const {
  if (!(g > 0.0) || g > g_max_ || !std::isfinite(g)) {
    std::ostringstream msg;
    msg << "measurement family '" << label_ << "': coupling g = " << g
        << " outside domain (0, " << g_max_ << "]";
    throw DomainError(msg.str());
  }
  std::vector<Mat> ops = eval_(g);
  if (static_cast<int>(ops.size()) != n_outcomes_) {
    std::ostringstream msg;
    msg << "measurement family '" << label_ << "': evaluator returned "
        << ops.size() << " operators at g = " << g << ", expected "
        << n_outcomes_;
    throw DimensionError(msg.str());
  }
  for (const Mat& m : ops) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      std::ostringstream msg;
      msg << "measurement family '" << label_
          << "': operator dimension changed across g (got " << m.rows() << "x"
          << m.cols() << " at g = " << g << ")";
      throw DimensionError(msg.str());
    }
  }
  return ops;
}

PovmSet povm_elements(const MeasurementFamily& family, double g) {
  PovmSet povm;
  povm.source_g = g;
  for (const Mat& m : family.operators_at(g)) {
    povm.elements.push_back(m.adjoint() * m);
  }
  return povm;
}

double completeness_residual(const MeasurementFamily& family, double g) {
  const std::vector<Mat> ops = family.operators_at(g);
  return max_abs(sum_of_povm(ops) -
                 Mat::Identity(family.dim(), family.dim()));
}

RealVec outcome_probabilities(const MeasurementFamily& family, double g,
                              const DensityMatrix& rho) {
  if (rho.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "outcome_probabilities: state dimension " << rho.dim()
        << " != family dimension " << family.dim();
    throw DimensionError(msg.str());
  }
  const PovmSet povm = povm_elements(family, g);
  RealVec p(povm.n_outcomes());
  for (int j = 0; j < povm.n_outcomes(); ++j) {
    p(j) = std::clamp(real_trace_product(povm.elements[j], rho.matrix()), 0.0,
                      1.0);
  }
  return p;
}

std::pair<DensityMatrix, double> post_measurement_state(
    const Mat& m, const DensityMatrix& rho) {
  if (m.rows() != m.cols() || m.rows() != rho.dim()) {
    std::ostringstream msg;
    msg << "post_measurement_state: operator is " << m.rows() << "x"
        << m.cols() << ", state dimension " << rho.dim();
    throw DimensionError(msg.str());
  }
  Mat unnormalized = m * rho.matrix() * m.adjoint();
  const double eta = unnormalized.trace().real();
  if (eta <= tol::vanishing) {
    std::ostringstream msg;
    msg << "post_measurement_state: outcome is impossible for this state "
        << "(probability " << eta << " <= " << tol::vanishing << ")";
    throw DomainError(msg.str());
  }
  // Hermitian by construction; symmetrize away the multiplication rounding
  // before the validator sees it.
  Mat normalized = (unnormalized + unnormalized.adjoint()) / (2.0 * eta);
  return {validate_density(normalized), eta};
}

PostselectionStats postselection_stats(const MeasurementFamily& family,
                                       double g, const DensityMatrix& rho,
                                       const Postselection& post) {
  if (rho.dim() != family.dim() || post.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "postselection_stats: dimensions disagree (family " << family.dim()
        << ", state " << rho.dim() << ", postselection " << post.dim() << ")";
    throw DimensionError(msg.str());
  }
  const std::vector<Mat> ops = family.operators_at(g);
  PostselectionStats stats;
  stats.joint.resize(static_cast<Index>(ops.size()));
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const Mat evolved = ops[j] * rho.matrix() * ops[j].adjoint();
    stats.joint(static_cast<Index>(j)) =
        real_trace_product(post.projector, evolved);
  }
  stats.success_prob = stats.joint.sum();
  if (stats.success_prob <= tol::vanishing) {
    std::ostringstream msg;
    msg << "postselection_stats: postselection never succeeds (total "
        << "probability " << stats.success_prob << " <= " << tol::vanishing
        << ")";
    throw DomainError(msg.str());
  }
  stats.conditional = stats.joint / stats.success_prob;
  return stats;
}

double weakness_residual(const MeasurementFamily& family, double g,
                         const DensityMatrix& rho) {
  if (rho.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "weakness_residual: state dimension " << rho.dim()
        << " != family dimension " << family.dim();
    throw DimensionError(msg.str());
  }
  double worst = -1.0;
  for (const Mat& m : family.operators_at(g)) {
    const Mat evolved = m * rho.matrix() * m.adjoint();
    const double eta = evolved.trace().real();
    if (eta <= tol::vanishing) {
      continue;  // impossible outcome: no conditional state to compare
    }
    worst = std::max(worst, max_abs(evolved / eta - rho.matrix()));
  }
  if (worst < 0.0) {
    throw DomainError(
        "weakness_residual: every outcome is impossible for this state");
  }
  return worst;
}

}  // namespace cvq
