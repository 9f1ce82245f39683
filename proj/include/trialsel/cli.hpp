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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trialsel::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// Default output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "TRIALSEL_OUT_DIR";

struct PlanOptions {
  std::filesystem::path workload;
  std::string column;  // empty: first consumer column
  std::size_t vms = 12;
  std::size_t trial_days = 30;
  std::size_t period_d = 1;
  std::size_t slots_k = 30;
  double loss_budget = 0.0;
  std::filesystem::path out_dir = ".";
};

struct SelectOptions {
  std::filesystem::path workload;
  std::string column;
  std::filesystem::path trials;
  std::filesystem::path fingerprints;
  std::filesystem::path requirements;
  std::optional<std::filesystem::path> plan;
  double r_threshold = 0.5;
  double e_threshold = 1.0;
  std::string aggregate_default = "sum";
  std::vector<std::string> aggregate;     // "qos=mean" overrides
  std::vector<std::string> lower_better;  // QoS annotated as lower-is-better
  bool raw_distance = false;
  bool strict_zero_reference = false;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = ".";
};

struct ExperimentOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::filesystem::path out_dir = ".";
};

struct TraceOptions {
  std::filesystem::path out = "trace.csv";
  std::size_t consumers = 10;
  std::size_t ticks = 30;
  std::size_t months = 1;
  double jitter = 0.05;
  std::uint64_t seed = 1;
};

// Writes trial_plan.json. Returns kExitInfeasible when any VM misses the budget.
int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err);
// Writes selection_report.json, ranking.csv and predictions.csv.
int cmd_select(const SelectOptions& options, std::ostream& out, std::ostream& err);
// Writes report.json and figures/{prediction_series,prediction_nrmse,qos_distance}.csv.
int cmd_experiment(const ExperimentOptions& options, std::ostream& out, std::ostream& err);
// Writes a synthetic trace CSV.
int cmd_trace(const TraceOptions& options, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trialsel::cli
