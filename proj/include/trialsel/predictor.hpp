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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trialsel/fingerprint.hpp"
#include "trialsel/timeseries.hpp"
#include "trialsel/trialplan.hpp"

namespace trialsel {

// One trial VM seen as a workload class: the scalar level of its trial
// workload (mean of tw) and what it observed during the trial.
struct TrialClass {
  double level = 0.0;
  QosSeries observations;
};

struct TickProvenance {
  std::size_t trial_class = 0;
  Tick trial_tick = 1;  // position within the trial, in [1, Tr]
  double relative_weight = 1.0;
  bool weight_substituted = false;  // zero fingerprint reference, weight forced to 1

  bool operator==(const TickProvenance&) const = default;
};

struct PredictedPerformance {
  QosSeries per_qos;
  std::map<std::string, std::vector<TickProvenance>> provenance;
  std::vector<std::string> warnings;
};

struct PredictOptions {
  // Throw ZeroReference instead of substituting a weight of 1.
  bool strict_zero_reference = false;
};

// Index of the class whose level is closest to `demand`; the first wins ties.
std::size_t nearest_trial_workload(double demand, std::span<const TrialClass> classes);

// Cyclic position of a long-term tick inside the trial: ((t' - 1) mod Tr) + 1.
Tick map_trial_tick(Tick t_prime, Tick trial_length);

// P(t') / P(t_i) on a fingerprint series. Throws ZeroReference when P(t_i) == 0
// and OutOfCoverage when either tick is not on the series.
double relative_weight(const TimeSeries& fp_qos, Tick t_prime, Tick t_i);

// Pairs each VM of the plan with its observed trial series.
std::vector<TrialClass> trial_classes(const TrialExperience& trial, const TrialPlan& plan);

// For every tick t' of the workload: pick the nearest trial class, read its
// observation at the cyclically mapped trial tick and scale it by the
// fingerprint's relative weight between t' and that tick. Trial series are
// expected to start at the first tick of the trial window and to be spaced by
// the plan's stable period d; trial tick t_i reads the observation of the
// period containing it.
PredictedPerformance predict_long_term(const LongTermWorkload& workload, const TrialExperience& trial,
                                       const TrialPlan& plan, const PerformanceFingerprint& fp,
                                       PredictOptions options = {});

}  // namespace trialsel
