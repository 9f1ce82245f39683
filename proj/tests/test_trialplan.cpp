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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "trialsel/trialplan.hpp"

using trialsel::LongTermWorkload;
using trialsel::LossBudget;
using trialsel::TimeSeries;

namespace {

std::vector<double> values_of(const TimeSeries& s) { return {s.values().begin(), s.values().end()}; }

LongTermWorkload ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return LongTermWorkload(TimeSeries(v));
}

// Loss of compressing w at a given rate, computed without the library.
double candidate_loss(const std::vector<double>& w, std::size_t rate) {
  return oracle::mae(w, oracle::line_fill(oracle::block_means(w, rate), rate, w.size()));
}

}  // namespace

TEST(Workload, RejectsNegativeDemand) {
  EXPECT_THROW(LongTermWorkload(TimeSeries({1, -1})), std::invalid_argument);
}

TEST(Constraints, Validation) {
  EXPECT_NO_THROW((trialsel::TrialConstraints{12, 30, 1, 30}.validate()));
  EXPECT_NO_THROW((trialsel::TrialConstraints{12, 30, 5, 30}.validate()));
  EXPECT_THROW((trialsel::TrialConstraints{12, 30, 7, 30}.validate()), std::invalid_argument);
  EXPECT_THROW((trialsel::TrialConstraints{12, 30, 60, 30}.validate()), std::invalid_argument);
  EXPECT_THROW((trialsel::TrialConstraints{0, 30, 1, 30}.validate()), std::invalid_argument);
  EXPECT_THROW((trialsel::TrialConstraints{12, 30, 1, 0}.validate()), std::invalid_argument);
  EXPECT_EQ((trialsel::TrialConstraints{12, 30, 5, 30}.repetitions()), 6u);
}

TEST(Partition, Sizes) {
  const auto twelve = trialsel::partition_workload(ramp(12), 12);
  ASSERT_EQ(twelve.size(), 12u);
  for (const auto& p : twelve) EXPECT_EQ(p.size(), 1u);

  const auto months = trialsel::partition_workload(ramp(360), 12);
  for (const auto& p : months) EXPECT_EQ(p.size(), 30u);

  const auto odd = trialsel::partition_workload(ramp(7), 3);
  EXPECT_EQ(odd[0].size(), 3u);
  EXPECT_EQ(odd[1].size(), 2u);
  EXPECT_EQ(odd[2].size(), 2u);

  EXPECT_THROW(trialsel::partition_workload(ramp(3), 4), std::invalid_argument);
}

TEST(Partition, ConcatenationReproducesWorkload) {
  const auto w = ramp(101);
  const auto parts = trialsel::partition_workload(w, 7);
  std::vector<double> joined;
  trialsel::Tick expect_tick = 1;
  for (const auto& p : parts) {
    EXPECT_EQ(p.start(), expect_tick);
    expect_tick = p.last_tick() + 1;
    for (double x : p.values()) joined.push_back(x);
  }
  EXPECT_EQ(joined, values_of(w.series));
}

TEST(Summary, DistinctCount) {
  EXPECT_EQ(trialsel::summarize_workload(TimeSeries({5, 5, 5})), 1u);
  EXPECT_EQ(trialsel::summarize_workload(TimeSeries({1, 2, 2, 3})), 3u);
  EXPECT_EQ(trialsel::summarize_workload(TimeSeries({1.0, 1.5, 1.0, 2.0, 1.5})), 3u);
}

TEST(TrialWorkload, ConstantCompressesLosslessly) {
  const auto r = trialsel::generate_trial_workload(TimeSeries(std::vector<double>(6, 5)), 2, LossBudget(0.1));
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_LE(r.tw.size(), 2u);
  for (double x : r.tw.values()) EXPECT_EQ(x, 5.0);
}

TEST(TrialWorkload, ShortPartitionIsKeptVerbatim) {
  const TimeSeries w({1, 2, 3, 4});
  const auto r = trialsel::generate_trial_workload(w, 4, LossBudget(0));
  EXPECT_EQ(r.tw, w);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.rate, 1u);
  EXPECT_TRUE(r.feasible);
}

TEST(TrialWorkload, RampWithThreeSlots) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6};
  const double expect_loss = candidate_loss(v, 2);
  ASSERT_NEAR(expect_loss, 0.5, 1e-12);

  const auto within = trialsel::generate_trial_workload(TimeSeries(v), 3, LossBudget(0.5));
  EXPECT_TRUE(within.feasible);
  EXPECT_EQ(values_of(within.tw), (std::vector<double>{1.5, 3.5, 5.5}));
  EXPECT_NEAR(within.loss, expect_loss, 1e-12);

  const auto over = trialsel::generate_trial_workload(TimeSeries(v), 3, LossBudget(0.4));
  EXPECT_FALSE(over.feasible);
  EXPECT_EQ(over.rate, 2u);
}

TEST(TrialWorkload, ReturnsCoarsestRateWithinBudget) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(0, 40);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(60);
    for (auto& x : v) x = level(rng);
    const double budget = 6.0;
    const auto r = trialsel::generate_trial_workload(TimeSeries(v), 10, LossBudget(budget));
    ASSERT_TRUE(r.feasible == (candidate_loss(v, 6) <= budget));
    EXPECT_NEAR(r.loss, candidate_loss(v, r.rate), 1e-9);
    EXPECT_LE(r.tw.size(), 10u);
    if (r.feasible) {
      EXPECT_LE(r.loss, budget);
      if (r.rate < v.size()) EXPECT_GT(candidate_loss(v, r.rate + 1), budget) << "trial " << trial;
    }
  }
}

TEST(TrialWorkload, UnlimitedBudgetCompressesFully) {
  const auto r = trialsel::generate_trial_workload(ramp(50).series, 7, LossBudget::unlimited());
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.tw.size(), 1u);
  EXPECT_EQ(r.rate, 50u);
}

TEST(TrialWorkload, LargerBudgetNeverLosesFeasibility) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(45);
    for (auto& x : v) x = u(rng);
    bool seen_feasible = false;
    for (double budget : {1.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
      const bool f = trialsel::generate_trial_workload(TimeSeries(v), 9, LossBudget(budget)).feasible;
      if (seen_feasible) EXPECT_TRUE(f);
      seen_feasible = seen_feasible || f;
    }
  }
}

TEST(Plan, YearOverTwelveVms) {
  std::vector<double> v(360);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(100 + (i * 37) % 23);
  const auto plan = trialsel::build_trial_plan(LongTermWorkload(TimeSeries(v)), {12, 30, 1, 30}, LossBudget(5));
  ASSERT_EQ(plan.per_vm.size(), 12u);
  EXPECT_EQ(plan.repetitions, 30u);
  for (const auto& vm : plan.per_vm) {
    EXPECT_EQ(vm.partition.size(), 30u);
    EXPECT_LE(vm.workload.tw.size(), 30u);
  }
}

TEST(Plan, OnePointPerVm) {
  const auto plan = trialsel::build_trial_plan(ramp(5), {5, 10, 1, 1}, LossBudget(0));
  EXPECT_TRUE(plan.feasible());
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(values_of(plan.per_vm[j].workload.tw), (std::vector<double>{static_cast<double>(j)}));
    EXPECT_EQ(plan.per_vm[j].workload.loss, 0.0);
  }
}

TEST(Plan, ConstantWorkloadHasZeroLoss) {
  const auto plan =
      trialsel::build_trial_plan(LongTermWorkload(TimeSeries(std::vector<double>(360, 40))), {12, 30, 1, 30}, LossBudget(0));
  EXPECT_TRUE(plan.feasible());
  EXPECT_EQ(plan.total_loss(), 0.0);
  for (const auto& vm : plan.per_vm) {
    for (double x : vm.workload.tw.values()) EXPECT_EQ(x, 40.0);
  }
}

TEST(Plan, InfeasibleVmMarksPlan) {
  std::vector<double> v(40);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2) ? 100.0 : 0.0;
  const auto plan = trialsel::build_trial_plan(LongTermWorkload(TimeSeries(v)), {2, 4, 1, 2}, LossBudget(1));
  EXPECT_FALSE(plan.feasible());
}

TEST(Plan, Deterministic) {
  const auto a = trialsel::build_trial_plan(ramp(90), {3, 30, 1, 30}, LossBudget(2));
  const auto b = trialsel::build_trial_plan(ramp(90), {3, 30, 1, 30}, LossBudget(2));
  ASSERT_EQ(a.per_vm.size(), b.per_vm.size());
  for (std::size_t j = 0; j < a.per_vm.size(); ++j) {
    EXPECT_EQ(a.per_vm[j].workload.tw, b.per_vm[j].workload.tw);
    EXPECT_EQ(a.per_vm[j].workload.loss, b.per_vm[j].workload.loss);
  }
}
