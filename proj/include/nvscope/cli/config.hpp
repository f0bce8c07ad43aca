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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nvscope/builders.hpp"
#include "nvscope/errors.hpp"
#include "nvscope/simulator.hpp"
#include "nvscope/spin_system.hpp"

namespace nvscope::cli {

// Config that violates the schema. pointer is the JSON pointer of the offending value.
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct XySpectrumExperiment {
  int n_pulses = 64;
  std::vector<double> freq_mhz;
};

struct PulseSweepExperiment {
  double tau_us = 0.0;
  std::vector<int> n_pulses;
};

struct InversionInputs {
  double f_osc_khz = 0.0;
  double tau_us = 0.0;
};

struct CorrelationExperiment {
  double tau_us = 0.0;
  std::vector<double> t_corr_us;
  int block_pulses = 32;
  std::optional<InversionInputs> inversion;
};

struct B0SweepExperiment {
  std::vector<double> b0_mt;
  int n_pulses = 64;
  std::size_t nucleus = 0;
};

struct PulsePolExperiment {
  std::vector<double> inverse_2tau_pol_mhz;
  int repeats = 20;
};

struct TransientExperiment {
  double two_tau_pol_us = 0.0;
  int n_blocks = 20;
  int repeats = 20;
};

struct RabiExperiment {
  RabiSpec spec;
  std::vector<double> t_rf_us;
};

struct FidExperiment {
  FidSpec spec;
  std::optional<int> zone;
};

using Experiment = std::variant<XySpectrumExperiment, PulseSweepExperiment, CorrelationExperiment,
                                B0SweepExperiment, PulsePolExperiment, TransientExperiment, RabiExperiment,
                                FidExperiment>;

struct OutputSpec {
  std::string dir = "out";
  bool csv = true;
  bool svg = true;
};

struct ExperimentConfig {
  SpinSystem system;
  SimulationOptions options;
  Experiment experiment;
  std::string kind;
  OutputSpec output;
  nlohmann::json source;  // the config as read
};

// Validates against the schema in schemas/config.schema.json. Unknown keys fail.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string fingerprint(const nlohmann::json& document);

}  // namespace nvscope::cli
