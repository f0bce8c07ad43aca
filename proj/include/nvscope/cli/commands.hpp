// Copyright 2026 The nvscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nvscope/cli/config.hpp"

namespace nvscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSimulation = 3;
inline constexpr int kExitAnalysis = 4;

const char* version();

// Simulates and analyses one experiment. The record carries no timing, so equal
// configs give equal records for any thread count.
nlohmann::json run_experiment(const ExperimentConfig& config, unsigned threads);

// Thread count from the flag, else NVSCOPE_THREADS, else hardware concurrency.
unsigned resolve_threads(int flag_value);

// Full command line. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvscope::cli
