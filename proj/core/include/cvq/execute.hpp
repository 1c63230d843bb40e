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

#include <string>

#include "cvq/problem.hpp"

namespace cvq {

/// The five operations the command line exposes.
enum class Command { Check, Solve, Average, WeakLimit, Bounds };

Command command_from_string(const std::string& name);
std::string to_string(Command command);

struct ExecuteOptions {
  /// When set, a weaklimit run whose verdict is "anomalous" exits with
  /// status 2 instead of 0 (the expectation that the conditioned average
  /// converges to the weak value was violated).
  bool expect_weak_value = false;
};

/// The rendered result of a command: a JSON document, a CSV table of the
/// per-coupling rows (six significant digits), and the process exit status.
/// Output is deterministic: identical spec + command -> byte-identical
/// documents.
struct Report {
  int exit_code = 0;
  std::string json_text;
  std::string csv_text;
};

/// Runs a command against a problem spec. Errors surface as exceptions
/// derived from cvq::Error (the CLI maps them to exit status 1).
Report execute(const ProblemSpec& spec, Command command,
               const ExecuteOptions& options = {});

}  // namespace cvq
