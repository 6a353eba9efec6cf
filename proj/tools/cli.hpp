// Copyright 2026 The Envar Authors
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

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "envar/io.hpp"

namespace envar::cli {

using io::json;

/// One named check. It passes when `holds == expected`; demos that show a
/// failure on purpose set expected = false.
struct Verdict {
  std::string name;
  bool holds = false;
  bool expected = true;
  json detail = json::object();

  bool pass() const { return holds == expected; }
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  json values = json::object();

  void add(std::string name, bool holds, json detail = json::object(), bool expected = true);
  bool all_pass() const;
  json to_json() const;
};

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

/// Options shared by the demos.
struct DemoOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t restarts = 32;
  std::size_t steps = 2001;
  double beta = 1.0;
  std::vector<double> energies{0.0, 1.0};
  double tol = 1e-8;
};

/// EASTA checks on an arbitrary path (final time plus five readout times).
RunReport easta_report(const HamiltonianPath &path, const DemoOptions &opt,
                       const std::string &command);

RunReport demo_dfs(const DemoOptions &opt);
RunReport demo_nogo(const DemoOptions &opt);
RunReport demo_easta(const DemoOptions &opt);
RunReport demo_tfd(const DemoOptions &opt);
RunReport demo_discord(const DemoOptions &opt);

/// Runs the command line (args[0] is the program name). The JSON report goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace envar::cli
