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

// End-to-end checks against the installed `cvq` binary: every process is
// spawned through the shell, so exit codes and both output streams are
// observed exactly as a user would see them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#ifndef CVQ_TOOL_PATH
#error "CVQ_TOOL_PATH must point at the cvq executable"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class TempDir {
 public:
  TempDir() {
    char pattern[] = "/tmp/cvq_cli_test_XXXXXX";
    const char* made = mkdtemp(pattern);
    REQUIRE(made != nullptr);
    path_ = made;
  }
  ~TempDir() {
    const std::string cleanup = "rm -rf '" + path_ + "'";
    [[maybe_unused]] const int rc = std::system(cleanup.c_str());
  }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string full = path_ + "/" + name;
    std::ofstream out(full, std::ios::binary);
    out << content;
    return full;
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

RunResult run_cvq(const TempDir& dir, const std::string& args) {
  const std::string out_path = dir.path() + "/stdout.txt";
  const std::string err_path = dir.path() + "/stderr.txt";
  const std::string command = std::string(CVQ_TOOL_PATH) + " " + args + " >'" +
                              out_path + "' 2>'" + err_path + "'";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

const char* kProblem = R"({
  "family": "version1",
  "params": {"a": 1.0, "b": 0.0},
  "state": [[[0.5, 0], [0.2, 0]], [[0.2, 0], [0.5, 0]]],
  "postselect": [[1, 0], [1, 0]],
  "solver": "custom:parrott",
  "grid": [0.01, 0.005, 0.0025, 0.00125]
})";

}  // namespace

TEST_CASE("weaklimit runs a problem document and prints JSON") {
  TempDir dir;
  const std::string doc = dir.file("problem.json", kProblem);
  const RunResult run = run_cvq(dir, "weaklimit '" + doc + "'");
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  const auto report = nlohmann::json::parse(run.out);
  CHECK(report.at("command") == "weaklimit");
  CHECK(report.at("verdict") == "anomalous");
  CHECK(report.at("weak_value").get<double>() == doctest::Approx(0.5));
  CHECK(report.at("anomaly_estimate").get<double>() ==
        doctest::Approx(-8.0 / 7.0).epsilon(1e-4));
}

TEST_CASE("--expect-weak-value turns an anomalous verdict into exit 2") {
  TempDir dir;
  const std::string doc = dir.file("problem.json", kProblem);
  const RunResult run =
      run_cvq(dir, "weaklimit --expect-weak-value '" + doc + "'");
  CHECK(run.exit_code == 2);
  CHECK(nlohmann::json::parse(run.out).at("verdict") == "anomalous");

  // A family whose conditioned average does converge keeps exit 0.
  const RunResult calm =
      run_cvq(dir, "weaklimit --expect-weak-value --family identity --state '" +
                       dir.file("rho.json",
                                "[[[0.5, 0], [0.2, 0]], [[0.2, 0], [0.5, 0]]]") +
                       "' --postselect '" +
                       dir.file("post.json", "[[1, 0], [1, 0]]") + "'");
  CAPTURE(calm.err);
  CHECK(calm.exit_code == 0);
  CHECK(nlohmann::json::parse(calm.out).at("verdict") ==
        "converges_to_weak_value");
}

TEST_CASE("--out csv prints the tabular form") {
  TempDir dir;
  const std::string doc = dir.file("problem.json", kProblem);
  const RunResult run = run_cvq(dir, "average --out csv '" + doc + "'");
  REQUIRE(run.exit_code == 0);
  CHECK(run.out.rfind("g,value,weak_term,anomalous_term,denominator\n", 0) ==
        0);
  // Four grid rows plus the header.
  int lines = 0;
  for (char c : run.out) {
    lines += c == '\n' ? 1 : 0;
  }
  CHECK(lines == 5);
}

TEST_CASE("check works without a document when --family is given") {
  TempDir dir;
  const std::string rho = dir.file(
      "rho.json", "[[[0.5, 0], [0.2, 0]], [[0.2, 0], [0.5, 0]]]");
  const RunResult run =
      run_cvq(dir, "check --family version1 --param a=2,b=-1 --state '" + rho +
                       "' --grid 1e-2,2,4");
  CAPTURE(run.err);
  REQUIRE(run.exit_code == 0);
  const auto report = nlohmann::json::parse(run.out);
  CHECK(report.at("rows").size() == 4);
  CHECK(report.at("rows")[0].at("g").get<double>() == doctest::Approx(0.01));
  CHECK(report.at("rows")[3].at("g").get<double>() == doctest::Approx(0.00125));
}

TEST_CASE("--solver overrides the document's method") {
  TempDir dir;
  const std::string doc = dir.file("problem.json", kProblem);
  const RunResult run = run_cvq(dir, "solve --solver pinv '" + doc + "'");
  REQUIRE(run.exit_code == 0);
  const auto report = nlohmann::json::parse(run.out);
  CHECK(report.at("solver") == "pinv");
  // The least-norm solution stays modest where the diverging one blows up.
  const double alpha_1 = report.at("rows")[0].at("alpha")[0].get<double>();
  CHECK(std::abs(alpha_1) < 100.0);
}

TEST_CASE("invalid input exits 1 with a diagnostic on stderr") {
  TempDir dir;
  const std::string bad = dir.file("bad.json", R"({"family": "nosuch"})");
  const RunResult run = run_cvq(dir, "solve '" + bad + "'");
  CHECK(run.exit_code == 1);
  CHECK(run.out.empty());
  CHECK(run.err.find("error:") != std::string::npos);
  CHECK(run.err.find("unknown builtin family 'nosuch'") != std::string::npos);

  const RunResult misuse = run_cvq(dir, "solve --family version1");
  CHECK(misuse.exit_code == 1);
  CHECK(misuse.err.find("state: required") != std::string::npos);

  const RunResult bad_grid =
      run_cvq(dir, "check --family version1 --grid oops --state '" +
                       dir.file("rho2.json",
                                "[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]") +
                       "'");
  CHECK(bad_grid.exit_code == 1);
  CHECK(bad_grid.err.find("--grid") != std::string::npos);
}

TEST_CASE("stdout is byte-identical across repeat runs") {
  TempDir dir;
  const std::string doc = dir.file("problem.json", kProblem);
  const RunResult first = run_cvq(dir, "weaklimit '" + doc + "'");
  const RunResult second = run_cvq(dir, "weaklimit '" + doc + "'");
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
}
