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

#include "cvq/families.hpp"

#include <cmath>
#include <sstream>

#include "cvq/errors.hpp"

namespace cvq {

namespace {

Mat diag2(double x, double y) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

Mat diag3(double x, double y, double z) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = x;
  m(1, 1) = y;
  m(2, 2) = z;
  return m;
}

/// Assembles the probability matrix F[m][j] = (M_j^2)_mm straight from a
/// diagonal operator set (the catalog's numeric fallback for closed forms).
RealMat probability_matrix(const std::vector<Mat>& ops) {
  const Index dim = ops.front().rows();
  RealMat f(dim, static_cast<Index>(ops.size()));
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const Mat e = ops[j].adjoint() * ops[j];
    for (Index m = 0; m < dim; ++m) {
      f(m, static_cast<Index>(j)) = e(m, m).real();
    }
  }
  return f;
}

void reject_unknown_params(const std::map<std::string, double>& params,
                           std::initializer_list<const char*> allowed,
                           const std::string& family) {
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      std::ostringstream msg;
      msg << "family '" << family << "': unknown parameter '" << key << "'";
      throw DomainError(msg.str());
    }
  }
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int integral_param(const std::map<std::string, double>& params,
                   const std::string& key, int fallback,
                   const std::string& family) {
  const double raw = param_or(params, key, fallback);
  if (!(raw >= 1.0) || raw != std::floor(raw) || raw > 64.0) {
    std::ostringstream msg;
    msg << "family '" << family << "': parameter '" << key
        << "' must be an integer in [1, 64], got " << raw;
    throw DomainError(msg.str());
  }
  return static_cast<int>(raw);
}

}  // namespace

ExampleCatalogEntry version1_family(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("version1: observable eigenvalues must be finite");
  }

  auto eval = [](double g) {
    return std::vector<Mat>{
        diag2(0.5 + g, 0.5 - g),
        diag2(0.5 - g, 0.5 + g),
        std::sqrt(0.5 - 2.0 * g * g) * Mat::Identity(2, 2),
    };
  };
  MeasurementFamily family("version1", 0.2, eval);

  RealVec eigenvalues(2);
  eigenvalues << a, b;

  // The diverging solution: alpha_1 and alpha_2 blow up like 1/g^2 while the
  // system stays exactly solved (alpha_3 completes the first row; the second
  // row then holds identically because the rows differ by the 2g * (a - b)/2g
  // seesaw between the first two columns).
  auto parrott = [a, b](double g) {
    const double alpha1 = 1.0 / (g * g);
    const double alpha2 = 1.0 / (g * g) - (a - b) / (2.0 * g);
    const double alpha3 = (a - (0.5 + g) * (0.5 + g) * alpha1 -
                           (0.5 - g) * (0.5 - g) * alpha2) /
                          (0.5 - 2.0 * g * g);
    RealVec alpha(3);
    alpha << alpha1, alpha2, alpha3;
    return alpha;
  };

  auto pinv_solution = [eval, eigenvalues](double g) -> RealVec {
    return pseudo_inverse(probability_matrix(eval(g))) * eigenvalues;
  };

  return ExampleCatalogEntry{
      "version1",
      std::move(family),
      Observable::diagonal(eigenvalues),
      {{"parrott", parrott}, {"pinv", pinv_solution}},
  };
}

ExampleCatalogEntry dj3x3_family() {
  auto eval = [](double g) {
    return std::vector<Mat>{
        diag3(std::sqrt(0.5 + g), std::sqrt(0.5), std::sqrt(0.5 + g)),
        diag3(std::sqrt(1.0 / 3.0 + g * g), std::sqrt(1.0 / 3.0 + g),
              std::sqrt(1.0 / 3.0)),
        diag3(std::sqrt(1.0 / 6.0 - g - g * g), std::sqrt(1.0 / 6.0 - g),
              std::sqrt(1.0 / 6.0 - g)),
    };
  };
  // 0.14 keeps 1/6 - g - g^2 (the smallest operator entry) positive with
  // margin; the expression's positivity root sits near g = 0.1455.
  MeasurementFamily family("dj3x3", 0.14, eval);

  RealVec eigenvalues(3);
  eigenvalues << 1.0, 0.0, 0.0;

  // First column of the inverse probability matrix, which is invertible on
  // the whole domain; every contextual-value entry diverges like 1/g^2.
  auto pinv_solution = [](double g) {
    RealVec alpha(3);
    const double denom = 6.0 * g * g;
    alpha << (1.0 - 6.0 * g) / denom, (1.0 - 6.0 * g) / denom,
        -(5.0 + 6.0 * g) / denom;
    return alpha;
  };

  return ExampleCatalogEntry{
      "dj3x3",
      std::move(family),
      Observable::diagonal(eigenvalues),
      {{"pinv", pinv_solution}},
  };
}

ExampleCatalogEntry identity_family(Index dim, int n_outcomes) {
  if (dim < 1 || dim > 64) {
    throw DomainError("identity: dim must be in [1, 64]");
  }
  if (n_outcomes < 1 || n_outcomes > 64) {
    throw DomainError("identity: n must be in [1, 64]");
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n_outcomes));
  auto eval = [dim, n_outcomes, scale](double) {
    return std::vector<Mat>(static_cast<std::size_t>(n_outcomes),
                            scale * Mat::Identity(dim, dim));
  };
  MeasurementFamily family("identity", 1.0, eval);

  auto pinv_solution = [n_outcomes](double) -> RealVec {
    return RealVec::Ones(n_outcomes);
  };

  return ExampleCatalogEntry{
      "identity",
      std::move(family),
      Observable(Mat::Identity(dim, dim)),
      {{"pinv", pinv_solution}},
  };
}

ExampleCatalogEntry builtin_family(const std::string& name,
                                   const std::map<std::string, double>& params) {
  if (name == "version1") {
    reject_unknown_params(params, {"a", "b"}, name);
    return version1_family(param_or(params, "a", 1.0),
                           param_or(params, "b", 0.0));
  }
  if (name == "dj3x3") {
    reject_unknown_params(params, {}, name);
    return dj3x3_family();
  }
  if (name == "identity") {
    reject_unknown_params(params, {"dim", "n"}, name);
    return identity_family(integral_param(params, "dim", 2, name),
                           integral_param(params, "n", 3, name));
  }
  throw DomainError("unknown builtin family '" + name +
                    "' (expected version1, dj3x3, or identity)");
}

}  // namespace cvq
