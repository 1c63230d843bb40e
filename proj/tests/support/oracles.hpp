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

// Independent oracles for the numeric tests: everything here is computed by
// explicit loops and textbook formulas (no Eigen arithmetic, no library
// routines), so agreement with the implementation is evidence rather than
// tautology. Eigen matrices appear only as storage.

#pragma once

#include <cmath>
#include <vector>

#include "cvq/types.hpp"

namespace cvqtest {

/// Triple-loop matrix product.
inline cvq::Mat naive_product(const cvq::Mat& x, const cvq::Mat& y) {
  cvq::Mat out = cvq::Mat::Zero(x.rows(), y.cols());
  for (cvq::Index i = 0; i < x.rows(); ++i) {
    for (cvq::Index k = 0; k < x.cols(); ++k) {
      for (cvq::Index j = 0; j < y.cols(); ++j) {
        out(i, j) += x(i, k) * y(k, j);
      }
    }
  }
  return out;
}

inline cvq::Complex naive_trace(const cvq::Mat& m) {
  cvq::Complex sum = 0.0;
  for (cvq::Index i = 0; i < m.rows(); ++i) {
    sum += m(i, i);
  }
  return sum;
}

/// Analytic eigenvalues of the Hermitian 2x2 [[a, c], [conj(c), b]],
/// ascending.
inline std::pair<double, double> eig2_hermitian(double a, double b,
                                                cvq::Complex c) {
  const double mid = 0.5 * (a + b);
  const double rad = std::hypot(0.5 * (a - b), std::abs(c));
  return {mid - rad, mid + rad};
}

/// <f| m |f> for a normalized f, by explicit double loop.
inline cvq::Complex naive_expectation(const cvq::Mat& m, const cvq::CVec& f) {
  cvq::Complex sum = 0.0;
  for (cvq::Index i = 0; i < m.rows(); ++i) {
    for (cvq::Index j = 0; j < m.cols(); ++j) {
      sum += std::conj(f(i)) * m(i, j) * f(j);
    }
  }
  return sum;
}

/// The raw alpha-weighted postselected average
///   sum_j alpha_j <f| M_j rho M_j^dagger |f> / sum_j <f| M_j rho M_j^dagger |f>
/// evaluated term by term. Accurate only while the alpha-weighted numerator
/// does not cancel catastrophically; the split computation in the library
/// must agree with it in that regime.
inline double raw_conditioned_average(const std::vector<cvq::Mat>& ops,
                                      const cvq::RealVec& alpha,
                                      const cvq::Mat& rho,
                                      const cvq::CVec& f_normalized) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const cvq::Mat m_rho = naive_product(ops[j], rho);
    const cvq::Mat m_rho_mdag =
        naive_product(m_rho, cvq::Mat(ops[j].adjoint()));
    const double term = naive_expectation(m_rho_mdag, f_normalized).real();
    numerator += alpha(static_cast<cvq::Index>(j)) * term;
    denominator += term;
  }
  return numerator / denominator;
}

/// Weak value for a pure state |psi>:
///   Re( <f|A|psi> <psi|f> ) / |<f|psi>|^2.
inline double pure_state_weak_value(const cvq::Mat& a, const cvq::CVec& psi,
                                    const cvq::CVec& f) {
  cvq::Complex f_a_psi = 0.0;
  for (cvq::Index i = 0; i < a.rows(); ++i) {
    for (cvq::Index j = 0; j < a.cols(); ++j) {
      f_a_psi += std::conj(f(i)) * a(i, j) * psi(j);
    }
  }
  cvq::Complex f_psi = 0.0;
  for (cvq::Index i = 0; i < psi.size(); ++i) {
    f_psi += std::conj(f(i)) * psi(i);
  }
  return (f_a_psi * std::conj(f_psi)).real() / std::norm(f_psi);
}

/// Least-squares slope of log|y| against log x (the fitted convergence
/// order), by the textbook normal equations.
inline double log_log_slope(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (static_cast<double>(n) * sxy - sx * sy) /
         (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace cvqtest
