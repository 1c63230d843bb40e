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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "cvq/contextual.hpp"
#include "cvq/families.hpp"
#include "cvq/measurement.hpp"
#include "cvq/operators.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cvq;
using namespace cvqtest;

namespace {

/// Independent pseudo-inverse for a full-row-rank 2xN matrix:
/// F^+ = F^T (F F^T)^{-1} with the 2x2 inverse written out by hand.
RealMat pinv_two_rows(const RealMat& f) {
  REQUIRE(f.rows() == 2);
  double a = 0.0, b = 0.0, c = 0.0;
  for (Index j = 0; j < f.cols(); ++j) {
    a += f(0, j) * f(0, j);
    b += f(0, j) * f(1, j);
    c += f(1, j) * f(1, j);
  }
  const double det = a * c - b * b;
  REQUIRE(std::abs(det) > 1e-12);
  RealMat out(f.cols(), 2);
  for (Index j = 0; j < f.cols(); ++j) {
    out(j, 0) = (f(0, j) * c - f(1, j) * b) / det;
    out(j, 1) = (-f(0, j) * b + f(1, j) * a) / det;
  }
  return out;
}

CvProblem version1_problem(double g) {
  const auto entry = version1_family(1.0, 0.0);
  return build_cv_problem(povm_elements(entry.family, g), entry.observable);
}

}  // namespace

TEST_CASE("Observable rejects non-Hermitian matrices and reads diagonals") {
  Mat skew(2, 2);
  skew << Complex(1.0, 0.0), Complex(0.5, 0.0),  //
      Complex(0.2, 0.0), Complex(0.0, 0.0);
  CHECK_THROWS_AS(Observable{skew}, DomainError);

  RealVec d(3);
  d << 1.0, 0.0, -2.0;
  const Observable a = Observable::diagonal(d);
  CHECK(a.is_diagonal());
  CHECK(max_abs(RealMat(a.diagonal_values() - d)) == 0.0);

  std::mt19937_64 rng(0x5eed0201);
  const Observable dense(rand_hermitian(rng, 3));
  CHECK_FALSE(dense.is_diagonal());
}

TEST_CASE("probability matrix of the 2x2 builtin at g = 0.1 (hand computed)") {
  // Row m lists (E_j)_mm: ((0.6)^2, (0.4)^2, 0.48) and the swap.
  const CvProblem problem = version1_problem(0.1);
  REQUIRE(problem.f_matrix.rows() == 2);
  REQUIRE(problem.f_matrix.cols() == 3);
  CHECK(std::abs(problem.f_matrix(0, 0) - 0.36) <= 1e-15);
  CHECK(std::abs(problem.f_matrix(0, 1) - 0.16) <= 1e-15);
  CHECK(std::abs(problem.f_matrix(0, 2) - 0.48) <= 1e-15);
  CHECK(std::abs(problem.f_matrix(1, 0) - 0.16) <= 1e-15);
  CHECK(std::abs(problem.f_matrix(1, 1) - 0.36) <= 1e-15);
  CHECK(std::abs(problem.f_matrix(1, 2) - 0.48) <= 1e-15);
  CHECK(problem.target(0) == 1.0);
  CHECK(problem.target(1) == 0.0);
  CHECK(problem.source_g == 0.1);
}

TEST_CASE("build_cv_problem requires a shared eigenbasis") {
  std::mt19937_64 rng(0x5eed0202);
  const MeasurementFamily family =
      wrap_constant_family(rand_measurement_ops(rng, 2, 3));
  const PovmSet povm = povm_elements(family, 0.5);
  RealVec d(2);
  d << 1.0, 0.0;
  CHECK_THROWS_WITH_AS(build_cv_problem(povm, Observable::diagonal(d)),
                       doctest::Contains("into the common eigenbasis"),
                       DomainError);

  // Diagonal POVM but non-diagonal observable fails the same way.
  const auto entry = version1_family(1.0, 0.0);
  const PovmSet diag_povm = povm_elements(entry.family, 0.1);
  const Observable dense(rand_hermitian(rng, 2));
  CHECK_THROWS_AS(build_cv_problem(diag_povm, dense), DomainError);
}

TEST_CASE("pseudo_inverse satisfies the four Penrose conditions") {
  std::mt19937_64 rng(0x5eed0203);
  for (int trial = 0; trial < 100; ++trial) {
    const Index rows = 2 + trial % 3;
    const Index cols = 2 + (trial / 3) % 3;
    RealMat f(rows, cols);
    if (trial % 4 == 0) {
      // Force rank deficiency: f = outer product chain of rank 1.
      RealVec u(rows), v(cols);
      for (Index i = 0; i < rows; ++i) u(i) = rand_real(rng, -2.0, 2.0);
      for (Index j = 0; j < cols; ++j) v(j) = rand_real(rng, -2.0, 2.0);
      f = u * v.transpose();
    } else {
      for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
          f(i, j) = rand_real(rng, -2.0, 2.0);
        }
      }
    }
    const RealMat p = pseudo_inverse(f);
    const double scale = std::max(1.0, f.norm());
    CHECK(max_abs(RealMat(f * p * f - f)) <= 1e-10 * scale);
    CHECK(max_abs(RealMat(p * f * p - p)) <= 1e-10 * std::max(1.0, p.norm()));
    CHECK(max_abs(RealMat((f * p).transpose() - f * p)) <= 1e-10);
    CHECK(max_abs(RealMat((p * f).transpose() - p * f)) <= 1e-10);
  }
}

TEST_CASE("pseudo_inverse matches the closed rank-2 formula on builtins") {
  for (double g : {0.1, 0.05, 0.01}) {
    const CvProblem problem = version1_problem(g);
    const RealMat numeric = pseudo_inverse(problem.f_matrix);
    const RealMat closed = pinv_two_rows(problem.f_matrix);
    CHECK(max_abs(RealMat(numeric - closed)) <=
          1e-10 * std::max(1.0, closed.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("nullspace_basis spans the kernel") {
  const CvProblem problem = version1_problem(0.1);
  const auto basis = nullspace_basis(problem.f_matrix);
  REQUIRE(basis.size() == 1);  // 2x3 with independent rows
  CHECK(std::abs(basis[0].norm() - 1.0) <= 1e-12);
  CHECK((problem.f_matrix * basis[0]).norm() <= 1e-12);

  const RealMat square = RealMat::Identity(3, 3);
  CHECK(nullspace_basis(square).empty());
}

TEST_CASE("solve_pinv returns the least-norm exact solution") {
  std::mt19937_64 rng(0x5eed0204);
  for (double g : {0.1, 0.05, 0.01, 0.002}) {
    const CvProblem problem = version1_problem(g);
    const CvSolution solution = solve_pinv(problem);
    CHECK(solution.method == CvMethod::PseudoInverse);

    // Exactness: the reported residual obeys the relative gate.
    const double scale = 1.0 + problem.f_matrix.norm() * solution.alpha.norm() +
                         problem.target.norm();
    CHECK(solution.residual <= 1e-9 * scale);

    // Agreement with the independent rank-2 closed form.
    const RealVec closed = pinv_two_rows(problem.f_matrix) * problem.target;
    CHECK(max_abs(RealMat(solution.alpha - closed)) <=
          1e-9 * std::max(1.0, closed.cwiseAbs().maxCoeff()));

    // Least norm: orthogonal to the nullspace, and no feasible competitor is
    // shorter.
    const auto basis = nullspace_basis(problem.f_matrix);
    for (const RealVec& v : basis) {
      CHECK(std::abs(solution.alpha.dot(v)) <= 1e-9 * solution.alpha.norm());
    }
    for (int k = 0; k < 10; ++k) {
      RealVec shift = RealVec::Zero(solution.alpha.size());
      for (const RealVec& v : basis) {
        shift += rand_real(rng, -5.0, 5.0) * v;
      }
      CHECK(solution.alpha.norm() <=
            (solution.alpha + shift).norm() + 1e-12);
    }
  }
}

TEST_CASE("solve_pinv rejects systems with no exact solution") {
  CvProblem inconsistent;
  inconsistent.f_matrix = RealMat(2, 2);
  inconsistent.f_matrix << 1.0, 0.0, 1.0, 0.0;  // range = span{(1,1)}
  inconsistent.target = RealVec(2);
  inconsistent.target << 1.0, 0.0;
  inconsistent.source_g = 0.1;
  CHECK_THROWS_WITH_AS(solve_pinv(inconsistent),
                       doctest::Contains("no exact contextual values"),
                       SolveError);
}

TEST_CASE("solve_minvar minimizes the weighted second moment") {
  std::mt19937_64 rng(0x5eed0205);
  const auto entry = version1_family(1.0, 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double g = rand_real(rng, 0.02, 0.2);
    const CvProblem problem =
        build_cv_problem(povm_elements(entry.family, g), entry.observable);
    const DensityMatrix rho = validate_density(rand_density(rng, 2));
    const RealVec p = outcome_probabilities(entry.family, g, rho);

    const CvSolution best = solve_minvar(problem, p);
    CHECK(best.method == CvMethod::MinVariance);
    const double scale = 1.0 + problem.f_matrix.norm() * best.alpha.norm() +
                         problem.target.norm();
    CHECK(best.residual <= 1e-9 * scale);
    CHECK(necessary_condition_residual(problem, best, p) <= 1e-9);

    const double best_cost = cv_statistics(best.alpha, p).second_moment;
    const auto basis = nullspace_basis(problem.f_matrix);
    REQUIRE(!basis.empty());
    for (int k = 0; k < 50; ++k) {
      RealVec competitor = best.alpha;
      for (const RealVec& v : basis) {
        competitor += rand_real(rng, -4.0, 4.0) * v;
      }
      const double cost = cv_statistics(competitor, p).second_moment;
      CHECK(best_cost <= cost + 1e-12);
    }

    // A generic exact solution does NOT satisfy the optimality condition.
    CvSolution shifted = best;
    shifted.alpha += 2.0 * basis[0];
    CHECK(necessary_condition_residual(problem, shifted, p) > 1e-6);
  }
}

TEST_CASE("solve_minvar with uniform weights reduces to the least norm") {
  const CvProblem problem = version1_problem(0.1);
  RealVec uniform(3);
  uniform << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  const CvSolution minvar = solve_minvar(problem, uniform);
  const CvSolution pinv = solve_pinv(problem);
  CHECK(max_abs(RealMat(minvar.alpha - pinv.alpha)) <= 1e-9);
}

TEST_CASE("solve_minvar tolerates zero-probability outcomes") {
  const CvProblem problem = version1_problem(0.1);
  RealVec p(3);
  p << 0.5, 0.5, 0.0;  // third outcome never fires
  const CvSolution solution = solve_minvar(problem, p);
  const double scale = 1.0 + problem.f_matrix.norm() * solution.alpha.norm() +
                       problem.target.norm();
  CHECK(solution.residual <= 1e-9 * scale);
  CHECK(necessary_condition_residual(problem, solution, p) <= 1e-9);

  RealVec bogus(3);
  bogus << 0.5, 0.4, 0.3;  // sums to 1.2
  CHECK_THROWS_AS(solve_minvar(problem, bogus), DomainError);
}

TEST_CASE("cv_statistics on a hand-checked case") {
  RealVec alpha(2);
  alpha << 2.0, 0.0;
  RealVec p(2);
  p << 0.5, 0.5;
  const CvStatistics stats = cv_statistics(alpha, p);
  CHECK(stats.mean == 1.0);
  CHECK(stats.second_moment == 2.0);
  CHECK(stats.variance == 1.0);
  CHECK(stats.bound_star == 4.0);
  CHECK(stats.bound_dstar == 4.0);
}

TEST_CASE("second moment respects both bounds on random data") {
  std::mt19937_64 rng(0x5eed0206);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + trial % 4;
    const RealVec alpha = rand_alpha(rng, n);
    const RealVec p = rand_prob_vector(rng, n);
    const CvStatistics stats = cv_statistics(alpha, p);
    CHECK(stats.variance <= stats.second_moment + 1e-12);
    CHECK(stats.second_moment <= stats.bound_dstar + 1e-12);
    CHECK(stats.bound_dstar < stats.bound_star - 1e-12);
  }
}

TEST_CASE("quadratic_limit_fit recovers exact quadratics") {
  std::vector<std::pair<double, double>> samples;
  for (double g : default_sweep_grid()) {
    samples.emplace_back(g, 0.75 - 2.0 * g + 13.0 * g * g);
  }
  const QuadraticFit fit = quadratic_limit_fit(samples);
  CHECK(std::abs(fit.constant - 0.75) <= 1e-12);
  CHECK(fit.residual_norm <= 1e-12);
}

TEST_CASE("quadratic_limit_fit rejects degenerate sample sets") {
  using Samples = std::vector<std::pair<double, double>>;
  Samples too_few = {{0.1, 1.0}, {0.05, 1.0}, {0.025, 1.0}};
  CHECK_THROWS_AS(quadratic_limit_fit(too_few), DomainError);

  Samples repeated = {{0.1, 1.0}, {0.1, 1.0}, {0.05, 1.0}, {0.05, 1.0}};
  CHECK_THROWS_AS(quadratic_limit_fit(repeated), DomainError);

  Samples negative = {{0.1, 1.0}, {0.05, 1.0}, {-0.025, 1.0}, {0.0125, 1.0}};
  CHECK_THROWS_AS(quadratic_limit_fit(negative), DomainError);
}

TEST_CASE("fit_leading_order reads divergence coefficients off a sweep") {
  std::vector<std::pair<double, double>> samples;
  for (double g : default_sweep_grid()) {
    const double g2 = g * g;
    samples.emplace_back(g, 3.0 / (g2 * g2) - 1.0 / (g2 * g));
  }
  // g^4 * value = 3 - g: the fit recovers the constant exactly.
  CHECK(std::abs(fit_leading_order(samples, 4) - 3.0) <= 1e-10);
}

TEST_CASE("default sweep grid is the descending doubling ladder") {
  const std::vector<double> grid = default_sweep_grid();
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == 0.01);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    CHECK(grid[k + 1] == grid[k] / 2.0);
  }
}
