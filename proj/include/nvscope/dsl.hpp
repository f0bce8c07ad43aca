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

#include <string>
#include <string_view>

#include "nvscope/program.hpp"

namespace nvscope {

// Parses the pulse-sequence text format (see docs/sequence_grammar.md).
// Errors raise ParseError with 1-based line and column.
PulseProgram parse_sequence(std::string_view text);

// Canonical text. parse_sequence(format_sequence(p)) == p.
std::string format_sequence(const PulseProgram& program);

// Shortest decimal that parses back to the same double.
std::string format_number(double value);

}  // namespace nvscope
