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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trialsel/fingerprint.hpp"
#include "trialsel/selector.hpp"
#include "trialsel/simharness.hpp"
#include "trialsel/trialplan.hpp"

namespace trialsel::io {

using nlohmann::json;

std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);
std::string polarity_name(Polarity p);
Polarity polarity_from_name(const std::string& name);
std::string aggregation_name(AggregationMode m);
AggregationMode aggregation_from_name(const std::string& name);

// {"start": 1, "step": 1, "values": [...]}
json to_json(const TimeSeries& s);
TimeSeries time_series_from_json(const json& j);

json to_json(const TrialPlan& plan);
TrialPlan trial_plan_from_json(const json& j);

// {"provider_id": "...", "period_T": 360, "qos": {"name": [[tick, value], ...]}}
json to_json(const PerformanceFingerprint& fp);
PerformanceFingerprint fingerprint_from_json(const json& j);
// Accepts a single fingerprint document or an array of them.
std::vector<PerformanceFingerprint> fingerprints_from_json(const json& j);

json to_json(const ConfidenceScore& c);
ConfidenceScore confidence_from_json(const json& j);

json to_json(const SelectionReport& r);
SelectionReport selection_report_from_json(const json& j);

json to_json(const ExperimentReport& r);
ExperimentReport experiment_report_from_json(const json& j);

json to_json(const ExperimentConfig& c);
// Throws ConfigError carrying the JSON pointer of the bad field.
ExperimentConfig experiment_config_from_json(const json& j);

// Observations from one provider's trial, as read from a trial observation
// document:
// {"trials": [{"provider_id": "p01", "window_start": 1, "trial_Tr": 30, "period_d": 1,
//              "vms": [{"trial_workload": [...], "qos": {"name": [v, ...]}}]}]}
// `trial_workload` may be omitted when the levels come from a trial plan.
struct ProviderTrial {
  std::string provider_id;
  Tick window_start = 1;
  std::size_t trial_length = 1;
  std::size_t stable_period = 1;
  std::vector<std::optional<std::vector<double>>> trial_workloads;
  TrialExperience experience;
};

json to_json(const std::vector<ProviderTrial>& trials);
std::vector<ProviderTrial> trials_from_json(const json& j);

// rank,provider_id,total_distance,mean_correlation,mean_nrmse,verdict
struct RankingRow {
  std::size_t rank = 0;
  std::string provider_id;
  double total_distance = 0.0;
  std::optional<double> mean_correlation;
  std::optional<double> mean_nrmse;
  std::optional<Verdict> verdict;

  bool operator==(const RankingRow&) const = default;
};

void write_ranking_csv(std::ostream& out, const SelectionReport& report);
void write_ranking_csv(std::ostream& out, const std::vector<RankingRow>& rows);
std::vector<RankingRow> read_ranking_csv(std::istream& in, const std::string& source);
std::vector<RankingRow> ranking_rows(const SelectionReport& report);

// `tick,<qos>,...` table of required levels.
ConsumerRequirements read_requirements_csv(std::istream& in, const std::string& source);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
std::string dump(const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace trialsel::io
