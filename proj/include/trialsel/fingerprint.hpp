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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trialsel/timeseries.hpp"

namespace trialsel {

using QosSeries = std::map<std::string, TimeSeries>;

// Per-QoS average performance of one provider over ticks [1, period]. A
// fingerprint may be partial: ticks with no published value are resolved by
// linear interpolation between the nearest known neighbours, and ticks outside
// the known range of a QoS raise OutOfCoverage.
class PerformanceFingerprint {
 public:
  using Points = std::map<Tick, double>;

  PerformanceFingerprint(std::string provider_id, Tick period, std::map<std::string, Points> qos);

  // A fingerprint backed by dense series. Each series must lie in [1, period].
  static PerformanceFingerprint from_series(std::string provider_id, Tick period,
                                            const QosSeries& qos);

  const std::string& provider_id() const noexcept { return provider_id_; }
  Tick period() const noexcept { return period_; }
  const std::map<std::string, Points>& points() const noexcept { return qos_; }

  bool has_qos(const std::string& qos) const { return qos_.count(qos) != 0; }
  std::vector<std::string> qos_names() const;

  // Every tick of [1, period] is present for every QoS.
  bool complete() const;
  // Ticks of [1, period] without a value, per QoS (only QoS with gaps appear).
  std::map<std::string, std::vector<Tick>> missing_ticks() const;

  double value_at(const std::string& qos, Tick t) const;
  // Values on the tick grid of `grid`.
  TimeSeries sample(const std::string& qos, const TimeSeries& grid) const;
  // Dense series over [first, last] with step 1.
  TimeSeries series(const std::string& qos, Tick first, Tick last) const;

  PerformanceFingerprint scaled(double factor) const;

  bool operator==(const PerformanceFingerprint&) const = default;

 private:
  std::string provider_id_;
  Tick period_;
  std::map<std::string, Points> qos_;
};

enum class AggregationMode { sum, mean };

struct AggregationModes {
  AggregationMode default_mode = AggregationMode::sum;
  std::map<std::string, AggregationMode> per_qos;

  AggregationMode mode_for(const std::string& qos) const;
};

// Observed trial performance: one QoS map per VM, plus the cross-VM
// aggregate once aggregate_trial has run.
struct TrialExperience {
  std::vector<QosSeries> per_vm;
  QosSeries aggregated;
  std::map<std::string, AggregationMode> modes;
};

// Inclusive tick range of the trial within the fingerprint period.
struct TrialWindow {
  Tick first = 1;
  Tick last = 1;
};

struct Thresholds {
  double min_correlation = 0.5;
  double max_nrmse = 1.0;
};

enum class Verdict { full_match, partial_match };

struct ConfidenceScore {
  double mean_correlation = 0.0;
  double mean_nrmse = 0.0;
  std::map<std::string, double> per_qos_correlation;
  std::map<std::string, double> per_qos_nrmse;
  // QoS whose correlation was undefined (zero variance) and recorded as 0.
  std::set<std::string> degenerate_qos;
  Verdict verdict = Verdict::partial_match;

  bool operator==(const ConfidenceScore&) const = default;
};

// Per-tick sum (or mean) across VMs of each QoS series.
TrialExperience aggregate_trial(TrialExperience experience, const AggregationModes& modes = {});

ConfidenceScore match_fingerprint(const TrialExperience& aggregated, const PerformanceFingerprint& fp,
                                  TrialWindow window, Thresholds thresholds = {});

// Moves every aggregated value halfway toward the fingerprint. Per-VM series
// move halfway toward their share of the fingerprint (the fingerprint itself
// for mean-aggregated QoS, fingerprint / v for summed QoS) so that
// re-aggregating the transformed VMs reproduces the transformed aggregate.
TrialExperience transform_experience(const TrialExperience& aggregated, const PerformanceFingerprint& fp,
                                     TrialWindow window);

}  // namespace trialsel
