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

#include "dpcomposer/output.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "nlohmann/json.hpp"

namespace dpcomposer {
namespace {

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

absl::StatusOr<OutputFormat> ParseOutputFormat(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  return absl::InvalidArgumentError(
      absl::StrCat("UsageError: unknown format '", name, "'"));
}

std::string FormatCell(const Cell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const {
      return absl::StrFormat("%.15g", d);
    }
    std::string operator()(int64_t i) const { return absl::StrCat(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

std::string FormatCsv(const Table& table) {
  std::string out = absl::StrJoin(table.columns, ",") + "\n";
  for (const std::vector<Cell>& row : table.rows) {
    absl::StrAppend(&out,
                    absl::StrJoin(row, ",",
                                  [](std::string* o, const Cell& c) {
                                    o->append(QuoteCsv(FormatCell(c)));
                                  }),
                    "\n");
  }
  return out;
}

std::string FormatJson(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const std::vector<Cell>& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      const Cell& c = row[i];
      if (const double* d = std::get_if<double>(&c)) {
        // JSON has no infinities or NaN; emit them as strings.
        if (std::isfinite(*d)) {
          obj[table.columns[i]] = *d;
        } else {
          obj[table.columns[i]] = FormatCell(c);
        }
      } else if (const int64_t* v = std::get_if<int64_t>(&c)) {
        obj[table.columns[i]] = *v;
      } else if (const bool* b = std::get_if<bool>(&c)) {
        obj[table.columns[i]] = *b;
      } else {
        obj[table.columns[i]] = std::get<std::string>(c);
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

std::string FormatTable(const Table& table, OutputFormat format) {
  return format == OutputFormat::kJson ? FormatJson(table) : FormatCsv(table);
}

}  // namespace dpcomposer
