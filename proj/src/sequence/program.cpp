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

#include "nvscope/program.hpp"

#include <type_traits>

#include "nvscope/errors.hpp"

namespace nvscope {

bool Block::operator==(const Block& other) const {
  return count == other.count && macro == other.macro && body == other.body;
}

double element_duration(const PulseElement& element) {
  return std::visit(
      [](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Delay>) {
          return e.duration_us;
        } else if constexpr (std::is_same_v<T, RfPulse>) {
          return e.duration_us;
        } else {
          return 0.0;
        }
      },
      element);
}

double total_duration(const std::vector<Node>& nodes) {
  double total = 0.0;
  for (const auto& node : nodes) {
    if (const auto* e = node.element()) {
      total += element_duration(*e);
    } else {
      const auto& b = *node.block();
      total += b.count * total_duration(b.body);
    }
  }
  return total;
}

double total_duration(const PulseProgram& program) { return total_duration(program.nodes); }

double free_evolution(const std::vector<Node>& nodes) {
  double total = 0.0;
  for (const auto& node : nodes) {
    if (const auto* e = node.element()) {
      if (const auto* d = std::get_if<Delay>(e)) total += d->duration_us;
    } else {
      const auto& b = *node.block();
      total += b.count * free_evolution(b.body);
    }
  }
  return total;
}

namespace {

void flatten_into(const std::vector<Node>& nodes, std::vector<PulseElement>& out) {
  for (const auto& node : nodes) {
    if (const auto* e = node.element()) {
      out.push_back(*e);
    } else {
      const auto& b = *node.block();
      for (int k = 0; k < b.count; ++k) flatten_into(b.body, out);
    }
  }
}

void add_counts(const ElementCounts& c, std::size_t times, ElementCounts& out) {
  out.pi += c.pi * times;
  out.half_pi += c.half_pi * times;
  out.delays += c.delays * times;
  out.rf += c.rf * times;
  out.laser_init += c.laser_init * times;
  out.laser_read += c.laser_read * times;
}

template <class Pred>
bool any_element(const std::vector<Node>& nodes, Pred pred) {
  for (const auto& node : nodes) {
    if (const auto* e = node.element()) {
      if (pred(*e)) return true;
    } else if (any_element(node.block()->body, pred)) {
      return true;
    }
  }
  return false;
}

void validate_nodes(const std::vector<Node>& nodes) {
  for (const auto& node : nodes) {
    if (const auto* b = node.block()) {
      if (b->count < 1) throw ParameterError("repetition count must be at least 1");
      validate_nodes(b->body);
      continue;
    }
    std::visit(
        [](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Delay>) {
            if (!(e.duration_us >= 0.0)) throw ParameterError("delay duration must be >= 0");
          } else if constexpr (std::is_same_v<T, RfPulse>) {
            if (!(e.duration_us >= 0.0)) throw ParameterError("rf duration must be >= 0");
            if (!(e.rabi_khz > 0.0)) throw ParameterError("rf Rabi frequency must be > 0");
          }
        },
        *node.element());
  }
}

}  // namespace

std::vector<PulseElement> flatten(const std::vector<Node>& nodes) {
  std::vector<PulseElement> out;
  flatten_into(nodes, out);
  return out;
}

std::vector<PulseElement> flatten(const PulseProgram& program) { return flatten(program.nodes); }

ElementCounts count_elements(const std::vector<Node>& nodes) {
  ElementCounts out;
  for (const auto& node : nodes) {
    if (const auto* b = node.block()) {
      add_counts(count_elements(b->body), static_cast<std::size_t>(b->count), out);
      continue;
    }
    std::visit(
        [&out](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, MwPulse>) {
            (e.angle == MwAngle::Pi ? out.pi : out.half_pi)++;
          } else if constexpr (std::is_same_v<T, Delay>) {
            out.delays++;
          } else if constexpr (std::is_same_v<T, RfPulse>) {
            out.rf++;
          } else if constexpr (std::is_same_v<T, LaserInit>) {
            out.laser_init++;
          } else {
            out.laser_read++;
          }
        },
        *node.element());
  }
  return out;
}

ElementCounts count_elements(const PulseProgram& program) { return count_elements(program.nodes); }

bool contains_laser(const std::vector<Node>& nodes) {
  return any_element(nodes, [](const PulseElement& e) {
    return std::holds_alternative<LaserInit>(e) || std::holds_alternative<LaserRead>(e);
  });
}

bool contains_rf(const std::vector<Node>& nodes) {
  return any_element(nodes, [](const PulseElement& e) { return std::holds_alternative<RfPulse>(e); });
}

void validate(const PulseProgram& program) { validate_nodes(program.nodes); }

}  // namespace nvscope
