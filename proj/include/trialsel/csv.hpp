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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trialsel/timeseries.hpp"

namespace trialsel::csv {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Whole-field parses; surrounding spaces are ignored, anything else fails.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

// A `tick,<name>,...` table: uniformly spaced integer ticks, one finite
// decimal value per named column.
struct SeriesTable {
  std::vector<std::string> names;
  std::vector<TimeSeries> series;
};

// Throws ParseError with the offending line. `columns` picks columns by name
// (empty keeps all, in file order).
SeriesTable read_series_table(std::istream& in, const std::string& source,
                              const std::vector<std::string>& columns = {}, bool non_negative = false);

}  // namespace trialsel::csv
