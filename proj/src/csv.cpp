// Copyright 2026 The trialsel Authors
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

#include "trialsel/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>

#include "trialsel/error.hpp"

namespace trialsel::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const auto pos = line.find(sep, begin);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(begin)));
      return fields;
    }
    fields.push_back(trim(line.substr(begin, pos - begin)));
    begin = pos + 1;
  }
}

std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

SeriesTable read_series_table(std::istream& in, const std::string& source,
                              const std::vector<std::string>& columns, bool non_negative) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file (no header)");
  ++line_no;

  const std::string header_line = line;
  const auto header = split(header_line);
  if (header.empty() || header[0] != "tick") throw ParseError(source, line_no, "header must start with 'tick'");
  if (header.size() < 2) throw ParseError(source, line_no, "header names no value columns");

  std::vector<std::size_t> selected;
  if (columns.empty()) {
    for (std::size_t c = 1; c < header.size(); ++c) selected.push_back(c);
  } else {
    for (const auto& name : columns) {
      const auto it = std::find(header.begin() + 1, header.end(), name);
      if (it == header.end()) throw ParseError(source, line_no, "no column named '" + name + "'");
      selected.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }

  std::vector<std::vector<double>> values(selected.size());
  std::vector<std::int64_t> ticks;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    const auto tick = parse_int(cells[0]);
    if (!tick) throw ParseError(source, line_no, "tick '" + std::string(cells[0]) + "' is not an integer");
    if (!ticks.empty() && *tick <= ticks.back()) throw ParseError(source, line_no, "ticks must be strictly increasing");
    if (ticks.size() >= 2 && *tick - ticks.back() != ticks[1] - ticks[0]) {
      throw ParseError(source, line_no, "ticks are not uniformly spaced");
    }
    ticks.push_back(*tick);
    for (std::size_t s = 0; s < selected.size(); ++s) {
      const auto cell = cells[selected[s]];
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(source, line_no, "value '" + std::string(cell) + "' is not a finite number");
      }
      if (non_negative && *v < 0.0) throw ParseError(source, line_no, "value " + std::string(cell) + " is negative");
      values[s].push_back(*v);
    }
  }
  if (ticks.empty()) throw ParseError(source + ": no data rows (header only)");

  const std::int64_t step = ticks.size() >= 2 ? ticks[1] - ticks[0] : 1;
  SeriesTable table;
  for (std::size_t s = 0; s < selected.size(); ++s) {
    table.names.emplace_back(header[selected[s]]);
    table.series.emplace_back(ticks.front(), step, std::move(values[s]));
  }
  return table;
}

}  // namespace trialsel::csv
