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
#include <stdexcept>
#include <string>

namespace nvscope {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (r <= 0, B0 <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on an operator, e.g. a non-Hermitian Hamiltonian.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid builder or program parameter (pulse count not a multiple of 16, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Sequence timing that cannot be realised (t_L shorter than the sensing block).
class TimingError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class FitError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class InversionError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NoDipError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// Pulse-sequence text that does not follow the grammar. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, std::string token)
      : Error(format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)),
        detail_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& token() const { return token_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column,
                            const std::string& token) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!token.empty()) out += " (at '" + token + "')";
    return out;
  }

  std::size_t line_;
  std::size_t column_;
  std::string token_;
  std::string detail_;
};

}  // namespace nvscope
