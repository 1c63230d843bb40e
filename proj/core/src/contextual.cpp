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

#include "cvq/contextual.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cvq/errors.hpp"

namespace cvq {

namespace {

double offdiagonal_max_abs(const Mat& m) {
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i != j) {
        worst = std::max(worst, std::abs(m(i, j)));
      }
    }
  }
  return worst;
}

/// The solvability gate is relative to the solution scale: once alpha grows
/// like 1/g^2 (~1e8 on the fine end of the default grid), the representation
/// error of alpha alone makes an absolute 1e-9 residual unattainable in
/// doubles, while a genuinely inconsistent system has residual at the scale
/// of ||a|| regardless of alpha.
double solvability_scale(const RealMat& f, const RealVec& alpha,
                         const RealVec& a) {
  return 1.0 + f.norm() * alpha.norm() + a.norm();
}

void require_probability_vector(const RealVec& p, Index expected_size,
                                const char* op) {
  if (p.size() != expected_size) {
    std::ostringstream msg;
    msg << op << ": probability vector has length " << p.size()
        << ", expected " << expected_size;
    throw DimensionError(msg.str());
  }
  if (p.size() > 0 && p.minCoeff() < -1e-12) {
    std::ostringstream msg;
    msg << op << ": probability vector has negative entry " << p.minCoeff();
    throw DomainError(msg.str());
  }
  if (std::abs(p.sum() - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << op << ": probabilities sum to " << p.sum() << ", expected 1";
    throw DomainError(msg.str());
  }
}

}  // namespace

Observable::Observable(Mat a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    std::ostringstream msg;
    msg << "Observable: expected a non-empty square matrix, got " << a_.rows()
        << "x" << a_.cols();
    throw DimensionError(msg.str());
  }
  const double herm = hermiticity_residual(a_);
  if (herm > tol::hermiticity) {
    std::ostringstream msg;
    msg << "Observable: matrix is not Hermitian (residual " << herm << " > "
        << tol::hermiticity << ")";
    throw DomainError(msg.str());
  }
}

Observable Observable::diagonal(const RealVec& d) {
  Mat m = Mat::Zero(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) {
    m(i, i) = d(i);
  }
  return Observable(std::move(m));
}

bool Observable::is_diagonal(double tolerance) const {
  return offdiagonal_max_abs(a_) <= tolerance;
}

RealVec Observable::diagonal_values() const {
  if (!is_diagonal()) {
    std::ostringstream msg;
    msg << "Observable: matrix is not diagonal (max off-diagonal "
        << offdiagonal_max_abs(a_)
        << "); diagonalize into the common eigenbasis first";
    throw DomainError(msg.str());
  }
  return a_.diagonal().real();
}

CvProblem build_cv_problem(const PovmSet& povm, const Observable& observable) {
  if (povm.elements.empty()) {
    throw DimensionError("build_cv_problem: POVM has no elements");
  }
  const Index dim = povm.dim();
  if (observable.dim() != dim) {
    std::ostringstream msg;
    msg << "build_cv_problem: observable dimension " << observable.dim()
        << " != POVM dimension " << dim;
    throw DimensionError(msg.str());
  }

  for (std::size_t j = 0; j < povm.elements.size(); ++j) {
    const Mat& e = povm.elements[j];
    if (e.rows() != dim || e.cols() != dim) {
      std::ostringstream msg;
      msg << "build_cv_problem: POVM element " << j + 1 << " is " << e.rows()
          << "x" << e.cols() << ", expected " << dim << "x" << dim;
      throw DimensionError(msg.str());
    }
    const double offdiag = offdiagonal_max_abs(e);
    if (offdiag > tol::diagonality) {
      std::ostringstream msg;
      msg << "build_cv_problem: POVM element " << j + 1
          << " is not diagonal (max off-diagonal " << offdiag
          << "); rotate the problem into the common eigenbasis first";
      throw DomainError(msg.str());
    }
  }

  CvProblem problem;
  problem.target = observable.diagonal_values();  // throws if A not diagonal
  problem.source_g = povm.source_g;
  problem.f_matrix.resize(dim, static_cast<Index>(povm.elements.size()));
  for (std::size_t j = 0; j < povm.elements.size(); ++j) {
    for (Index m = 0; m < dim; ++m) {
      problem.f_matrix(m, static_cast<Index>(j)) =
          povm.elements[j](m, m).real();
    }
  }
  return problem;
}

RealMat pseudo_inverse(const RealMat& f) {
  if (f.size() == 0) {
    throw DimensionError("pseudo_inverse: empty matrix");
  }
  Eigen::JacobiSVD<RealMat> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& sigma = svd.singularValues();
  const double cutoff =
      sigma.size() > 0 ? tol::svd_rank_cutoff * sigma(0) : 0.0;
  RealVec inverted = RealVec::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inverted(i) = 1.0 / sigma(i);
    }
  }
  return svd.matrixV() * inverted.asDiagonal() * svd.matrixU().transpose();
}

std::vector<RealVec> nullspace_basis(const RealMat& f) {
  if (f.size() == 0) {
    throw DimensionError("nullspace_basis: empty matrix");
  }
  Eigen::JacobiSVD<RealMat> svd(f, Eigen::ComputeFullV);
  const RealVec& sigma = svd.singularValues();
  const double cutoff =
      sigma.size() > 0 ? tol::svd_rank_cutoff * sigma(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      ++rank;
    }
  }
  std::vector<RealVec> basis;
  for (Index k = rank; k < f.cols(); ++k) {
    basis.push_back(svd.matrixV().col(k));
  }
  return basis;
}

CvSolution solve_pinv(const CvProblem& problem) {
  if (problem.f_matrix.rows() != problem.target.size()) {
    std::ostringstream msg;
    msg << "solve_pinv: system has " << problem.f_matrix.rows()
        << " rows but target has length " << problem.target.size();
    throw DimensionError(msg.str());
  }
  CvSolution sol;
  sol.method = CvMethod::PseudoInverse;
  sol.alpha = pseudo_inverse(problem.f_matrix) * problem.target;
  sol.residual = (problem.f_matrix * sol.alpha - problem.target).norm();
  const double gate =
      tol::solution_residual *
      solvability_scale(problem.f_matrix, sol.alpha, problem.target);
  if (sol.residual > gate) {
    std::ostringstream msg;
    msg << "no exact contextual values exist: the observable eigenvalues are "
        << "not in the range of the POVM probability matrix (residual "
        << sol.residual << " > gate " << gate << ")";
    throw SolveError(msg.str(), sol.residual);
  }
  return sol;
}

CvSolution solve_minvar(const CvProblem& problem,
                        const RealVec& probabilities) {
  if (problem.f_matrix.rows() != problem.target.size()) {
    std::ostringstream msg;
    msg << "solve_minvar: system has " << problem.f_matrix.rows()
        << " rows but target has length " << problem.target.size();
    throw DimensionError(msg.str());
  }
  require_probability_vector(probabilities, problem.f_matrix.cols(),
                             "solve_minvar");

  // Substituting beta = W^{1/2} alpha turns the weighted problem into a plain
  // least-norm one: minimize ||beta|| subject to (F W^{-1/2}) beta = a.
  RealVec inv_sqrt_w(probabilities.size());
  for (Index j = 0; j < probabilities.size(); ++j) {
    inv_sqrt_w(j) = 1.0 / std::sqrt(std::max(probabilities(j),
                                             tol::weight_floor));
  }
  const RealMat weighted = problem.f_matrix * inv_sqrt_w.asDiagonal();

  CvSolution sol;
  sol.method = CvMethod::MinVariance;
  sol.alpha = inv_sqrt_w.asDiagonal() * (pseudo_inverse(weighted) *
                                         problem.target);
  sol.residual = (problem.f_matrix * sol.alpha - problem.target).norm();
  const double gate =
      tol::solution_residual *
      solvability_scale(problem.f_matrix, sol.alpha, problem.target);
  if (sol.residual > gate) {
    std::ostringstream msg;
    msg << "no exact contextual values exist: the observable eigenvalues are "
        << "not in the range of the POVM probability matrix (residual "
        << sol.residual << " > gate " << gate << ")";
    throw SolveError(msg.str(), sol.residual);
  }
  return sol;
}

double necessary_condition_residual(const CvProblem& problem,
                                    const CvSolution& solution,
                                    const RealVec& probabilities) {
  if (solution.alpha.size() != problem.f_matrix.cols()) {
    std::ostringstream msg;
    msg << "necessary_condition_residual: solution has "
        << solution.alpha.size() << " values, system has "
        << problem.f_matrix.cols() << " outcomes";
    throw DimensionError(msg.str());
  }
  require_probability_vector(probabilities, problem.f_matrix.cols(),
                             "necessary_condition_residual");

  const RealVec weighted = probabilities.cwiseProduct(solution.alpha);
  double sumsq = 0.0;
  for (const RealVec& basis_vector : nullspace_basis(problem.f_matrix)) {
    const double coeff = basis_vector.dot(weighted);
    sumsq += coeff * coeff;
  }
  return std::sqrt(sumsq);
}

CvStatistics cv_statistics(const RealVec& alpha, const RealVec& probabilities) {
  if (alpha.size() == 0) {
    throw DimensionError("cv_statistics: empty contextual-value vector");
  }
  require_probability_vector(probabilities, alpha.size(), "cv_statistics");

  CvStatistics stats;
  stats.mean = probabilities.dot(alpha);
  stats.second_moment = probabilities.dot(alpha.cwiseAbs2());
  stats.variance = stats.second_moment - stats.mean * stats.mean;
  stats.bound_star = alpha.squaredNorm();
  stats.bound_dstar = std::sqrt(alpha.cwiseAbs2().cwiseAbs2().sum());
  return stats;
}

QuadraticFit quadratic_limit_fit(
    std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 4) {
    std::ostringstream msg;
    msg << "quadratic_limit_fit: need at least 4 samples, got "
        << samples.size();
    throw DomainError(msg.str());
  }
  std::set<double> distinct;
  double g_scale = 0.0;
  for (const auto& [g, v] : samples) {
    if (!(g > 0.0) || !std::isfinite(g) || !std::isfinite(v)) {
      throw DomainError(
          "quadratic_limit_fit: samples must have finite values and g > 0");
    }
    distinct.insert(g);
    g_scale = std::max(g_scale, g);
  }
  if (distinct.size() < 3) {
    std::ostringstream msg;
    msg << "quadratic_limit_fit: degenerate grid (" << distinct.size()
        << " distinct couplings, need >= 3)";
    throw DomainError(msg.str());
  }

  const Index n = static_cast<Index>(samples.size());
  RealMat design(n, 3);
  RealVec values(n);
  for (Index i = 0; i < n; ++i) {
    const double t = samples[static_cast<std::size_t>(i)].first / g_scale;
    design(i, 0) = 1.0;
    design(i, 1) = t;
    design(i, 2) = t * t;
    values(i) = samples[static_cast<std::size_t>(i)].second;
  }
  Eigen::JacobiSVD<RealMat> svd(design,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec coeffs = svd.solve(values);

  QuadraticFit fit;
  fit.constant = coeffs(0);
  fit.residual_norm = (design * coeffs - values).norm();
  return fit;
}

double fit_leading_order(const std::vector<std::pair<double, double>>& samples,
                         int power) {
  std::vector<std::pair<double, double>> scaled;
  scaled.reserve(samples.size());
  for (const auto& [g, v] : samples) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("fit_leading_order: couplings must be finite and > 0");
    }
    scaled.emplace_back(g, v * std::pow(g, power));
  }
  return quadratic_limit_fit(scaled).constant;
}

std::vector<double> default_sweep_grid() {
  std::vector<double> grid;
  double g = 1e-2;
  for (int k = 0; k < 8; ++k) {
    grid.push_back(g);
    g /= 2.0;
  }
  return grid;
}

}  // namespace cvq
