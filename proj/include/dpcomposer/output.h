//
// Copyright 2026 The DP Composer Authors
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
//

// Tabular report emission as CSV or JSON.

#ifndef DPCOMPOSER_OUTPUT_H_
#define DPCOMPOSER_OUTPUT_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"

namespace dpcomposer {

using Cell = std::variant<std::string, double, int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void AddRow(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class OutputFormat { kCsv, kJson };

// Errors: UsageError for anything but "csv" or "json".
absl::StatusOr<OutputFormat> ParseOutputFormat(const std::string& name);

// Doubles are printed with 15 significant digits.
std::string FormatCell(const Cell& cell);

std::string FormatCsv(const Table& table);

// An array of objects, keys in column order.
std::string FormatJson(const Table& table);

std::string FormatTable(const Table& table, OutputFormat format);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_OUTPUT_H_
