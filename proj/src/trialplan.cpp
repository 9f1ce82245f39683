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

#include "trialsel/trialplan.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trialsel {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

TrialWorkload evaluate_rate(const TimeSeries& w, std::size_t rate) {
  TrialWorkload candidate{paa_compress(w, rate), 0.0, rate, true};
  candidate.loss = mae_loss(w, paa_decompress(candidate.tw, w.size(), w.step()));
  return candidate;
}

}  // namespace

LongTermWorkload::LongTermWorkload(TimeSeries s) : series(std::move(s)) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i] < 0.0) {
      throw std::invalid_argument("workload value at tick " + std::to_string(series.tick(i)) +
                                  " is negative");
    }
  }
}

void TrialConstraints::validate() const {
  if (vm_count < 1) throw std::invalid_argument("vm count must be >= 1");
  if (trial_length < 1) throw std::invalid_argument("trial length must be >= 1");
  if (stable_period < 1) throw std::invalid_argument("stable period must be >= 1");
  if (slots_per_period < 1) throw std::invalid_argument("slots per period must be >= 1");
  if (stable_period > trial_length) {
    throw std::invalid_argument("stable period exceeds the trial length");
  }
  if (trial_length % stable_period != 0) {
    throw std::invalid_argument("trial length must be a multiple of the stable period");
  }
}

bool TrialPlan::feasible() const noexcept {
  return std::all_of(per_vm.begin(), per_vm.end(),
                     [](const VmTrial& vm) { return vm.workload.feasible; });
}

double TrialPlan::total_loss() const noexcept {
  double total = 0.0;
  for (const auto& vm : per_vm) total += vm.workload.loss;
  return total;
}

std::vector<TimeSeries> partition_workload(const LongTermWorkload& workload, std::size_t v) {
  const std::size_t n = workload.horizon();
  if (v == 0 || v > n) {
    throw std::invalid_argument("cannot partition " + std::to_string(n) + " points into " +
                                std::to_string(v) + " parts");
  }
  const auto values = workload.series.values();
  const std::size_t base = n / v;
  const std::size_t extra = n % v;

  std::vector<TimeSeries> parts;
  parts.reserve(v);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < v; ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    parts.emplace_back(workload.series.tick(offset), workload.series.step(),
                       std::vector<double>(values.begin() + offset, values.begin() + offset + len));
    offset += len;
  }
  return parts;
}

std::size_t summarize_workload(const TimeSeries& w) {
  std::vector<double> sorted(w.values().begin(), w.values().end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

TrialWorkload generate_trial_workload(const TimeSeries& w, std::size_t slots_k, LossBudget budget) {
  if (slots_k == 0) throw std::invalid_argument("slots per period must be >= 1");
  const std::size_t m = w.size();
  if (m <= slots_k) return TrialWorkload{w, 0.0, 1, true};

  const std::size_t min_rate = ceil_div(m, slots_k);
  const std::size_t summary = std::min(summarize_workload(w), slots_k);
  const std::size_t start_rate = std::max(ceil_div(m, summary), min_rate);

  TrialWorkload finest = evaluate_rate(w, min_rate);
  if (finest.loss > budget.max_loss) {
    finest.feasible = false;
    return finest;
  }

  // The summary-derived starting rate may already break the budget; back off
  // toward the finest rate, which is known to fit.
  TrialWorkload best = start_rate == min_rate ? finest : evaluate_rate(w, start_rate);
  if (best.loss > budget.max_loss) {
    for (std::size_t rate = start_rate - 1; rate >= min_rate; --rate) {
      best = rate == min_rate ? finest : evaluate_rate(w, rate);
      if (best.loss <= budget.max_loss) return best;
    }
    return finest;
  }

  for (std::size_t rate = start_rate + 1; rate <= m; ++rate) {
    TrialWorkload candidate = evaluate_rate(w, rate);
    if (candidate.loss > budget.max_loss) break;
    best = std::move(candidate);
  }
  return best;
}

TrialPlan build_trial_plan(const LongTermWorkload& workload, const TrialConstraints& constraints,
                           LossBudget budget) {
  constraints.validate();
  auto parts = partition_workload(workload, constraints.vm_count);

  TrialPlan plan{{}, constraints.repetitions(), constraints, budget.max_loss};
  plan.per_vm.reserve(parts.size());
  for (auto& part : parts) {
    auto tw = generate_trial_workload(part, constraints.slots_per_period, budget);
    plan.per_vm.push_back(VmTrial{std::move(part), std::move(tw)});
  }
  return plan;
}

}  // namespace trialsel
