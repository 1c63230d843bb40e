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

#include "cvq/weaklimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cvq/errors.hpp"

namespace cvq {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::ConvergesToWeakValue:
      return "converges_to_weak_value";
    case Verdict::Anomalous:
      return "anomalous";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double weak_value(const Observable& observable, const DensityMatrix& rho,
                  const Postselection& post) {
  if (observable.dim() != rho.dim() || post.dim() != rho.dim()) {
    std::ostringstream msg;
    msg << "weak_value: dimensions disagree (observable " << observable.dim()
        << ", state " << rho.dim() << ", postselection " << post.dim() << ")";
    throw DimensionError(msg.str());
  }
  const double overlap = real_trace_product(post.projector, rho.matrix());
  if (overlap <= tol::vanishing) {
    std::ostringstream msg;
    msg << "weak_value: postselection overlap tr(P rho) = " << overlap
        << " vanishes; the weak value is undefined for this pair";
    throw DomainError(msg.str());
  }
  const Mat sym = anticommutator(observable.matrix(), rho.matrix());
  return 0.5 * real_trace_product(post.projector, sym) / overlap;
}

ConditionedAverageBreakdown conditioned_average(const MeasurementFamily& family,
                                                double g,
                                                const CvSolution& solution,
                                                const DensityMatrix& rho,
                                                const Postselection& post) {
  if (rho.dim() != family.dim() || post.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "conditioned_average: dimensions disagree (family " << family.dim()
        << ", state " << rho.dim() << ", postselection " << post.dim() << ")";
    throw DimensionError(msg.str());
  }
  const std::vector<Mat> ops = family.operators_at(g);
  if (solution.alpha.size() != static_cast<Index>(ops.size())) {
    std::ostringstream msg;
    msg << "conditioned_average: solution has " << solution.alpha.size()
        << " contextual values, family has " << ops.size() << " outcomes";
    throw DimensionError(msg.str());
  }

  double denominator = 0.0;
  for (const Mat& m : ops) {
    denominator +=
        real_trace_product(post.projector, m * rho.matrix() * m.adjoint());
  }
  if (denominator <= tol::vanishing) {
    std::ostringstream msg;
    msg << "conditioned_average: postselection denominator " << denominator
        << " vanishes at g = " << g;
    throw DomainError(msg.str());
  }

  // Numerator through the disturbance split. For each outcome,
  //   M rho M = (1/2){M^2, rho} + (1/2)[M, [rho, M]],
  // so the alpha-weighted numerator separates into the weak part carried by
  // A_g = sum_j alpha_j M_j^2 and a double-commutator correction. The raw
  // alpha-weighted sum is mathematically identical but cancels
  // catastrophically once alpha ~ 1/g^2; the split form stays exact in the
  // weak limit.
  Mat a_weighted = Mat::Zero(family.dim(), family.dim());
  double anomalous_numerator = 0.0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const double alpha_j = solution.alpha(static_cast<Index>(j));
    a_weighted += alpha_j * (ops[j].adjoint() * ops[j]);
    const Mat disturbance = commutator(ops[j], commutator(rho.matrix(), ops[j]));
    anomalous_numerator +=
        0.5 * alpha_j * real_trace_product(post.projector, disturbance);
  }
  const double weak_numerator =
      0.5 * real_trace_product(post.projector,
                               anticommutator(a_weighted, rho.matrix()));

  ConditionedAverageBreakdown out;
  out.g = g;
  out.denominator = denominator;
  out.weak_term = weak_numerator / denominator;
  out.anomalous_term = anomalous_numerator / denominator;
  out.value = (weak_numerator + anomalous_numerator) / denominator;
  return out;
}

Mat anomalous_matrix_at_g(const MeasurementFamily& family, double g,
                          const CvSolution& solution,
                          const DensityMatrix& rho) {
  if (rho.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "anomalous_matrix_at_g: state dimension " << rho.dim()
        << " != family dimension " << family.dim();
    throw DimensionError(msg.str());
  }
  const std::vector<Mat> ops = family.operators_at(g);
  if (solution.alpha.size() != static_cast<Index>(ops.size())) {
    std::ostringstream msg;
    msg << "anomalous_matrix_at_g: solution has " << solution.alpha.size()
        << " contextual values, family has " << ops.size() << " outcomes";
    throw DimensionError(msg.str());
  }
  Mat s = Mat::Zero(family.dim(), family.dim());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    s -= 0.5 * solution.alpha(static_cast<Index>(k)) *
         commutator(ops[k], commutator(ops[k], rho.matrix()));
  }
  return s;
}

WeakLimitReport extrapolate_weak_limit(const MeasurementFamily& family,
                                       const Observable& observable,
                                       const CvSolver& solver,
                                       const DensityMatrix& rho,
                                       const Postselection& post,
                                       const std::vector<double>& grid) {
  if (!solver) {
    throw DomainError("extrapolate_weak_limit: null solver");
  }
  if (grid.size() < 4) {
    std::ostringstream msg;
    msg << "extrapolate_weak_limit: need at least 4 grid points, got "
        << grid.size();
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || grid[i] > family.g_max() ||
        !std::isfinite(grid[i])) {
      std::ostringstream msg;
      msg << "extrapolate_weak_limit: grid point " << grid[i]
          << " outside family domain (0, " << family.g_max() << "]";
      throw DomainError(msg.str());
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw DomainError(
          "extrapolate_weak_limit: grid must be strictly descending");
    }
  }

  WeakLimitReport report;
  report.weak_value = weak_value(observable, rho, post);

  for (const double g : grid) {
    CvSolution solution;
    try {
      solution = solver(build_cv_problem(povm_elements(family, g), observable));
    } catch (const Error& err) {
      std::ostringstream msg;
      msg << "extrapolate_weak_limit: contextual-value solve failed at g = "
          << g << ": " << err.what();
      throw SolveError(msg.str(), std::numeric_limits<double>::quiet_NaN());
    }
    report.sweep.push_back(conditioned_average(family, g, solution, rho, post));
  }

  std::vector<std::pair<double, double>> samples;
  samples.reserve(report.sweep.size());
  for (const ConditionedAverageBreakdown& point : report.sweep) {
    samples.emplace_back(point.g, point.value);
  }
  const QuadraticFit full = quadratic_limit_fit(samples);
  // Withholding the finest point measures how much the extrapolation still
  // moves as the sweep approaches the limit. A 4-point grid has nothing to
  // spare, so the term drops out there.
  double withheld_shift = 0.0;
  if (samples.size() >= 5) {
    const QuadraticFit coarse =
        quadratic_limit_fit(std::span(samples).first(samples.size() - 1));
    withheld_shift = std::abs(full.constant - coarse.constant);
  }

  double value_scale = 1.0;
  for (const auto& [g, v] : samples) {
    value_scale = std::max(value_scale, std::abs(v));
  }

  report.limit_estimate = full.constant;
  report.limit_uncertainty =
      std::max({full.residual_norm, withheld_shift, 1e-12 * value_scale});
  report.anomaly_estimate = report.limit_estimate - report.weak_value;

  const double anomaly = std::abs(report.anomaly_estimate);
  if (anomaly > std::max(10.0 * report.limit_uncertainty, 1e-6)) {
    report.verdict = Verdict::Anomalous;
  } else if (anomaly <= report.limit_uncertainty) {
    report.verdict = Verdict::ConvergesToWeakValue;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

}  // namespace cvq
