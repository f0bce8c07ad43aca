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

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nvscope {

enum class MwAxis { X, Y, MinusX, MinusY };
enum class MwAngle { Pi, HalfPi };

// Microwave rotation of the NV two-level system. Ideal pulses take no time.
struct MwPulse {
  MwAxis axis = MwAxis::X;
  MwAngle angle = MwAngle::Pi;

  bool operator==(const MwPulse&) const = default;
};

struct Delay {
  double duration_us = 0.0;

  bool operator==(const Delay&) const = default;
};

// Radio-frequency drive of the nuclei (rotating-wave). rabi_khz is the proton Rabi frequency.
struct RfPulse {
  double frequency_mhz = 0.0;
  double phase_rad = 0.0;
  double duration_us = 0.0;
  double rabi_khz = 0.0;

  bool operator==(const RfPulse&) const = default;
};

// Optical initialisation of the NV into m_S = 0.
struct LaserInit {
  bool operator==(const LaserInit&) const = default;
};

// Optical readout of P0; re-initialises the NV like LaserInit.
struct LaserRead {
  bool operator==(const LaserRead&) const = default;
};

using PulseElement = std::variant<MwPulse, Delay, RfPulse, LaserInit, LaserRead>;

struct Xy16Macro {
  int pulses = 16;
  double tau_us = 0.0;

  bool operator==(const Xy16Macro&) const = default;
};

enum class PolVariant { PolY, PolX };

struct PulsePolMacro {
  PolVariant variant = PolVariant::PolY;
  double tau_pol_us = 0.0;

  bool operator==(const PulsePolMacro&) const = default;
};

// Named block produced by a builder. The body of a macro block is the expanded
// unit (one XY16 cycle or one PolY/PolX cycle) and count its repetition.
using BlockMacro = std::variant<std::monostate, Xy16Macro, PulsePolMacro>;

struct Node;

// (body)^count
struct Block {
  std::vector<Node> body;
  int count = 1;
  BlockMacro macro;

  bool operator==(const Block& other) const;
};

struct Node {
  std::variant<PulseElement, Block> value;

  Node(PulseElement e) : value(std::move(e)) {}  // NOLINT(google-explicit-constructor)
  Node(MwPulse e) : value(PulseElement(e)) {}    // NOLINT
  Node(Delay e) : value(PulseElement(e)) {}      // NOLINT
  Node(RfPulse e) : value(PulseElement(e)) {}    // NOLINT
  Node(LaserInit e) : value(PulseElement(e)) {}  // NOLINT
  Node(LaserRead e) : value(PulseElement(e)) {}  // NOLINT
  Node(Block b) : value(std::move(b)) {}         // NOLINT

  const PulseElement* element() const { return std::get_if<PulseElement>(&value); }
  const Block* block() const { return std::get_if<Block>(&value); }

  bool operator==(const Node&) const = default;
};

struct PulseProgram {
  std::string name;
  std::vector<Node> nodes;
  std::map<std::string, double> parameters;
  // Axis of the final readout pulse ("X", "Y" or empty).
  std::string readout_axis;

  bool operator==(const PulseProgram&) const = default;
};

struct ElementCounts {
  std::size_t pi = 0;
  std::size_t half_pi = 0;
  std::size_t delays = 0;
  std::size_t rf = 0;
  std::size_t laser_init = 0;
  std::size_t laser_read = 0;

  bool operator==(const ElementCounts&) const = default;
};

double element_duration(const PulseElement& element);
double total_duration(const std::vector<Node>& nodes);
double total_duration(const PulseProgram& program);
double free_evolution(const std::vector<Node>& nodes);

// Expands every repetition block.
std::vector<PulseElement> flatten(const std::vector<Node>& nodes);
std::vector<PulseElement> flatten(const PulseProgram& program);

ElementCounts count_elements(const std::vector<Node>& nodes);
ElementCounts count_elements(const PulseProgram& program);

bool contains_laser(const std::vector<Node>& nodes);
bool contains_rf(const std::vector<Node>& nodes);

// Negative durations, non-positive rf Rabi frequencies or repetition counts < 1
// raise ParameterError.
void validate(const PulseProgram& program);

}  // namespace nvscope
