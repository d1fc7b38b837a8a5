// Copyright 2026 The lambda-fwm Authors
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

#include "lambda_fwm/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lfwm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitDomain = 4,
  kExitNumerical = 5,
  kExitIllPosed = 6,
};

struct CliFlags {
  std::string out_dir;  // empty: use the config's output_dir
  std::optional<int> points;
  unsigned threads = 1;
  bool emit_plot = false;
  std::string data_path;  // fit input trace
};

inline const std::vector<std::string> kSubcommands{"pulse",      "sweep",      "storage", "scaling",
                                                   "phasematch", "extract-fg", "fit"};

// Runs one subcommand; writes CSV (and optionally gnuplot) files to the output
// directory and a short report to `out`. Errors are reported on `err` as a
// single line and mapped to an ExitCode.
int run_subcommand(const std::string& name, const RunConfig& config, const CliFlags& flags, std::ostream& out,
                   std::ostream& err);

// Full command line: `lambda_fwm <subcommand> [--config PATH] [--out DIR]
// [--points N] [--threads N] [--emit-plot] [--data PATH]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Single-line record of the resolved configuration for CSV headers.
std::string provenance_line(const std::string& subcommand, const RunConfig& config);

}  // namespace lfwm
