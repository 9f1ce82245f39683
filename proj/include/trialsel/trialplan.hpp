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
#include <vector>

#include "trialsel/timeseries.hpp"

namespace trialsel {

// The consumer's demand (requested resources per tick) over its horizon.
struct LongTermWorkload {
  TimeSeries series;

  explicit LongTermWorkload(TimeSeries s);
  std::size_t horizon() const noexcept { return series.size(); }
};

struct TrialConstraints {
  std::size_t vm_count = 1;
  std::size_t trial_length = 1;   // Tr, in ticks
  std::size_t stable_period = 1;  // d: performance is treated as flat within d
  std::size_t slots_per_period = 1;  // k: workload points that fit in one period

  // Throws std::invalid_argument unless d <= Tr, Tr % d == 0 and all fields >= 1.
  void validate() const;
  std::size_t repetitions() const noexcept { return trial_length / stable_period; }
};

struct TrialWorkload {
  TimeSeries tw;
  double loss = 0.0;
  std::size_t rate = 1;
  bool feasible = true;
};

struct VmTrial {
  TimeSeries partition;
  TrialWorkload workload;
};

struct TrialPlan {
  std::vector<VmTrial> per_vm;
  std::size_t repetitions = 1;
  TrialConstraints constraints;
  double loss_budget = 0.0;

  bool feasible() const noexcept;
  double total_loss() const noexcept;
};

// v contiguous slices in temporal order; the first n % v slices carry one
// extra point.
std::vector<TimeSeries> partition_workload(const LongTermWorkload& workload, std::size_t v);

// Number of distinct values in `w`.
std::size_t summarize_workload(const TimeSeries& w);

// Chooses the coarsest PAA sampling rate whose reconstruction loss stays
// within budget while the result fits into `slots_k` points. When even the
// finest rate that fits exceeds the budget, that candidate is returned with
// feasible = false so callers can relax the budget or the period.
TrialWorkload generate_trial_workload(const TimeSeries& w, std::size_t slots_k, LossBudget budget);

TrialPlan build_trial_plan(const LongTermWorkload& workload, const TrialConstraints& constraints,
                           LossBudget budget);

}  // namespace trialsel
