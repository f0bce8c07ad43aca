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
#include <vector>

#include "nvscope/errors.hpp"

namespace nvscope::cli {

// Malformed CSV input; line is 1-based.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  // Index of a named column; throws CsvError(1, ...) when absent.
  std::size_t column(const std::string& name) const;
};

// Comma-separated, header row first, '.' decimals.
Table parse_csv(const std::string& text);
Table read_csv(const std::string& path);

// Floats with 17 significant digits, LF line endings.
std::string format_csv(const Table& table);

// Writes to a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Line plot with axes and tick labels.
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

std::string format_double(double value);

}  // namespace nvscope::cli
