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
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trialsel/fingerprint.hpp"
#include "trialsel/predictor.hpp"
#include "trialsel/selector.hpp"
#include "trialsel/timeseries.hpp"
#include "trialsel/trialplan.hpp"

namespace trialsel {

// Mixes a base seed with stream identifiers into an independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

// Trace CSV: header `tick,<consumer>,...`, one row per tick, uniformly spaced
// integer ticks and finite, non-negative decimal values. `columns` selects
// consumer columns by name (empty selects all). Fewer than `min_rows` data
// rows is an error.
std::vector<LongTermWorkload> ingest_trace(std::istream& in, const std::string& source,
                                           const std::vector<std::string>& columns = {},
                                           std::size_t min_rows = 1);
std::vector<LongTermWorkload> ingest_trace(const std::filesystem::path& path,
                                           const std::vector<std::string>& columns = {},
                                           std::size_t min_rows = 1);

// Consumer column names of a trace CSV header.
std::vector<std::string> trace_columns(const std::filesystem::path& path);

void write_trace(std::ostream& out, const std::vector<std::string>& names,
                 const std::vector<TimeSeries>& series);

// Concatenates `months` copies of `month`, each multiplied pointwise by a
// seeded factor drawn uniformly from [1 - jitter, 1 + jitter].
TimeSeries replicate_months(const TimeSeries& month, std::size_t months, std::uint64_t seed,
                            double jitter = 0.05);

struct SyntheticProvider {
  std::string provider_id;
  PerformanceFingerprint base_fingerprint;
  std::map<std::string, double> workload_sensitivity;
  std::map<std::string, double> noise_sigma;
  std::map<std::string, double> trial_isolation_bias;
  // Workload level at which sensitivity contributes nothing (the trace mean).
  double reference_workload = 0.0;
};

// base(q, t mod period) + sensitivity * (workload(t) - reference)
//   + N(0, sigma) + (bias when in_trial), on the workload's tick grid.
QosSeries observe_performance(const SyntheticProvider& provider, const TimeSeries& workload,
                              bool in_trial, std::uint64_t seed);

// Per-QoS, per-tick mean across consumers. Withheld ticks are dropped, which
// yields a partial fingerprint.
PerformanceFingerprint build_fingerprint_from_observations(std::string provider_id, Tick period,
                                                           const std::vector<QosSeries>& observations,
                                                           const std::set<Tick>& withheld = {});

// Shape of one QoS of a synthetic provider. The base fingerprint is
// level * (1 + annual * sin(2 pi (t-1) / T + phase) + weekly * sin(2 pi (t-1) / 7 + phase)).
struct QosProfile {
  double level = 1.0;
  double annual_amplitude = 0.0;
  double weekly_amplitude = 0.0;
  double phase = 0.0;
  double sensitivity = 0.0;
  double noise_sigma = 0.0;
  double trial_bias = 0.0;
};

struct ProviderSpec {
  std::string id;
  std::map<std::string, QosProfile> qos;
};

SyntheticProvider make_provider(const ProviderSpec& spec, Tick horizon, double reference_workload);

struct PopulationOptions {
  // QoS name -> base level of the first provider.
  std::map<std::string, double> base_levels{
      {"throughput", 1000.0}, {"insert_latency", 20.0}, {"read_latency", 10.0}};
  // Provider i runs at base * (1 + level_step * i).
  double level_step = 0.15;
  double annual_amplitude = 0.10;
  double weekly_amplitude = 0.03;
  // Performance shift per unit of workload deviation, as a fraction of level.
  double sensitivity = 0.0005;
  // Noise sigma as a fraction of the base fingerprint's range.
  double noise_fraction = 0.0;
  // Trial-only offset as a fraction of level.
  double bias_fraction = 0.0;
  // Horizon over which the noise range is measured.
  Tick horizon = 360;
};

// Deterministic provider population p01, p02, ... for experiments and tests.
std::vector<ProviderSpec> synthesize_providers(std::size_t count, std::uint64_t seed,
                                               const PopulationOptions& options = {});

struct TraceSource {
  enum class Kind { synthetic, file };
  Kind kind = Kind::synthetic;
  // file traces
  std::string path;
  std::vector<std::string> columns;
  // synthetic traces
  std::size_t consumers = 10;
  double base_level = 100.0;
  double level_spread = 0.5;
  double daily_variation = 0.3;
  // Length of the replicated unit; 0 means the trial length.
  std::size_t month_ticks = 0;
};

// Synthetic consumer months: integer resource counts with a per-consumer
// level and a weekly rhythm.
std::vector<TimeSeries> synthesize_trace(const TraceSource& source, std::size_t month_ticks,
                                         std::uint64_t seed);

struct ExperimentConfig {
  std::uint64_t rng_seed = 1;
  std::size_t horizon = 360;
  std::size_t trial_length = 30;
  std::size_t vm_count = 12;
  std::size_t stable_period = 1;
  std::size_t slots_per_period = 30;
  double loss_budget = 10.0;
  Thresholds thresholds;
  double replication_jitter = 0.05;
  std::size_t new_consumer = 0;
  // Provider whose ground truth becomes the consumer requirement; empty
  // selects the first provider.
  std::string requirement_provider;
  Tick trial_start = 1;
  AggregationModes aggregation{AggregationMode::mean, {}};
  // Inclusive tick ranges left out of every fingerprint.
  std::vector<std::pair<Tick, Tick>> withheld_fingerprint_ticks;
  bool normalize_distance = true;
  TraceSource trace;
  std::vector<ProviderSpec> providers;
  std::size_t jobs = 1;

  TrialConstraints constraints() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct ProviderOutcome {
  std::string provider_id;
  ConfidenceScore confidence;
  bool transformed = false;
  bool fingerprint_complete = true;
  std::map<std::string, double> nrmse_without;
  std::map<std::string, double> nrmse_with;
  double mean_nrmse_without = 0.0;
  double mean_nrmse_with = 0.0;
  std::map<std::string, double> actual_distance;
  double actual_total_distance = 0.0;
};

struct ExperimentReport {
  std::uint64_t rng_seed = 0;
  std::size_t consumer_count = 0;
  std::size_t new_consumer = 0;
  std::string requirement_provider;
  bool plan_feasible = true;
  double plan_total_loss = 0.0;
  std::vector<ProviderOutcome> providers;
  SelectionReport ranking_with;
  SelectionReport ranking_without;
  std::string ground_truth_best;
  bool best_ranked_first_with = false;
  bool best_ranked_first_without = false;
  double mean_nrmse_with = 0.0;
  double mean_nrmse_without = 0.0;
};

struct ProviderSeries {
  QosSeries actual;
  QosSeries predicted_without;
  QosSeries predicted_with;
};

struct ExperimentResult {
  ExperimentReport report;
  // Same order as report.providers.
  std::vector<ProviderSeries> series;
};

// Plan, observe, aggregate, match, optionally transform, predict and rank for
// every provider, once with the transformation path and once without.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace trialsel
