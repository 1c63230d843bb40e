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

#include <stdexcept>
#include <string>
#include <vector>

namespace cvq {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible or invalid dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its valid domain (coupling strength past g_max,
/// vanishing postselection overlap, impossible outcome, degenerate grid, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A candidate density matrix violates one of the state invariants. The kind
/// names the violated invariant and residual quantifies it.
class StateError : public Error {
 public:
  enum class Kind { NotHermitian, TraceNotOne, NotPositive };

  StateError(Kind kind, double residual, const std::string& message)
      : Error(message), kind_(kind), residual_(residual) {}

  Kind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  Kind kind_;
  double residual_;
};

/// No exact contextual values exist: the target eigenvalue vector is not in
/// the range of the probability matrix. Carries the least-squares residual.
class SolveError : public Error {
 public:
  SolveError(const std::string& message, double residual)
      : Error(message), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A problem document failed validation. Every violated field is reported,
/// not just the first one found.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "problem document invalid:";
    for (const auto& issue : issues) {
      out += "\n  - " + issue;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace cvq
