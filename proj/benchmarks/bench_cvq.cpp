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

#include <benchmark/benchmark.h>

#include <random>

#include "cvq/contextual.hpp"
#include "cvq/families.hpp"
#include "cvq/measurement.hpp"
#include "cvq/operators.hpp"
#include "cvq/weaklimit.hpp"

namespace {

cvq::DensityMatrix bench_state(cvq::Index dim) {
  std::mt19937_64 rng(0xbe9c);
  cvq::Mat g(dim, dim);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (cvq::Index r = 0; r < dim; ++r) {
    for (cvq::Index c = 0; c < dim; ++c) {
      g(r, c) = cvq::Complex(uniform(rng), uniform(rng));
    }
  }
  cvq::Mat rho = g * g.adjoint() + 0.05 * cvq::Mat::Identity(dim, dim);
  rho = (rho + rho.adjoint()) / 2.0;
  rho /= rho.trace().real();
  return cvq::validate_density(rho);
}

cvq::Postselection bench_postselection(cvq::Index dim) {
  cvq::CVec f = cvq::CVec::Ones(dim);
  return cvq::projector_from_vector(f);
}

void BM_PovmElements(benchmark::State& state) {
  const auto entry = cvq::dj3x3_family();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvq::povm_elements(entry.family, 0.01));
  }
}
BENCHMARK(BM_PovmElements);

void BM_PseudoInverse(benchmark::State& state) {
  const cvq::Index n = state.range(0);
  std::mt19937_64 rng(0xbe9c);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  cvq::RealMat f(n, n + 1);
  for (cvq::Index r = 0; r < n; ++r) {
    for (cvq::Index c = 0; c < n + 1; ++c) {
      f(r, c) = uniform(rng);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvq::pseudo_inverse(f));
  }
}
BENCHMARK(BM_PseudoInverse)->Arg(3)->Arg(8)->Arg(16);

void BM_ConditionedAverage(benchmark::State& state) {
  const auto entry = cvq::builtin_family("version1", {});
  const auto rho = bench_state(2);
  const auto post = bench_postselection(2);
  const double g = 0.01;
  const cvq::CvSolution solution{entry.closed_form_solutions.at("parrott")(g),
                                 cvq::CvMethod::Custom, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cvq::conditioned_average(entry.family, g, solution, rho, post));
  }
}
BENCHMARK(BM_ConditionedAverage);

void BM_WeakLimitSweep(benchmark::State& state) {
  const auto entry = cvq::dj3x3_family();
  const auto rho = bench_state(3);
  const auto post = bench_postselection(3);
  const auto grid = cvq::default_sweep_grid();
  const cvq::CvSolver solver = [](const cvq::CvProblem& problem) {
    return cvq::solve_pinv(problem);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvq::extrapolate_weak_limit(
        entry.family, entry.observable, solver, rho, post, grid));
  }
}
BENCHMARK(BM_WeakLimitSweep);

}  // namespace

BENCHMARK_MAIN();
