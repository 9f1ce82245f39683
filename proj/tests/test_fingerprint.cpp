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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "trialsel/error.hpp"
#include "trialsel/fingerprint.hpp"

using namespace trialsel;

namespace {

std::vector<double> values_of(const TimeSeries& s) { return {s.values().begin(), s.values().end()}; }

PerformanceFingerprint wave(Tick period, double level = 100.0, double amp = 10.0) {
  std::vector<double> tp, lat;
  for (Tick t = 1; t <= period; ++t) {
    tp.push_back(level + amp * std::sin(0.3 * static_cast<double>(t)));
    lat.push_back(level / 10 + std::cos(0.2 * static_cast<double>(t)));
  }
  return PerformanceFingerprint::from_series("p", period, {{"tp", TimeSeries(tp)}, {"lat", TimeSeries(lat)}});
}

TrialExperience single_vm(QosSeries qos) {
  TrialExperience e;
  e.per_vm.push_back(std::move(qos));
  return aggregate_trial(std::move(e));
}

}  // namespace

TEST(Fingerprint, RejectsTicksOutsidePeriod) {
  EXPECT_THROW(PerformanceFingerprint("p", 5, {{"tp", {{0, 1.0}}}}), std::invalid_argument);
  EXPECT_THROW(PerformanceFingerprint("p", 5, {{"tp", {{6, 1.0}}}}), std::invalid_argument);
  EXPECT_THROW(PerformanceFingerprint("p", 5, {{"tp", {}}}), std::invalid_argument);
}

TEST(Fingerprint, CompletenessAndMissingTicks) {
  const auto full = wave(10);
  EXPECT_TRUE(full.complete());
  const PerformanceFingerprint partial("p", 5, {{"tp", {{1, 1.0}, {2, 2.0}, {5, 5.0}}}, {"lat", {{1, 1.0}, {5, 1.0}}}});
  EXPECT_FALSE(partial.complete());
  const auto missing = partial.missing_ticks();
  EXPECT_EQ(missing.at("tp"), (std::vector<Tick>{3, 4}));
  EXPECT_EQ(missing.at("lat"), (std::vector<Tick>{2, 3, 4}));
}

TEST(Fingerprint, InterpolatesInsideCoverageOnly) {
  const PerformanceFingerprint fp("p", 10, {{"tp", {{2, 10.0}, {6, 30.0}}}});
  EXPECT_DOUBLE_EQ(fp.value_at("tp", 2), 10.0);
  EXPECT_DOUBLE_EQ(fp.value_at("tp", 3), 15.0);
  EXPECT_DOUBLE_EQ(fp.value_at("tp", 5), 25.0);
  EXPECT_THROW(fp.value_at("tp", 1), OutOfCoverage);
  EXPECT_THROW(fp.value_at("tp", 7), OutOfCoverage);
  EXPECT_THROW(fp.value_at("lat", 2), MissingQos);
}

TEST(Aggregate, SingleVmIsIdentity) {
  const TimeSeries s(4, 1, {3, 1, 4});
  const auto agg = single_vm({{"tp", s}});
  EXPECT_EQ(agg.aggregated.at("tp"), s);
}

TEST(Aggregate, SumAndMean) {
  TrialExperience e;
  for (int vm = 0; vm < 3; ++vm) e.per_vm.push_back({{"tp", TimeSeries({100, 100})}});
  EXPECT_EQ(values_of(aggregate_trial(e).aggregated.at("tp")), (std::vector<double>{300, 300}));

  TrialExperience lat;
  lat.per_vm.push_back({{"lat", TimeSeries({10, 20})}});
  lat.per_vm.push_back({{"lat", TimeSeries({30, 40})}});
  const auto mean = aggregate_trial(lat, AggregationModes{AggregationMode::sum, {{"lat", AggregationMode::mean}}});
  EXPECT_EQ(values_of(mean.aggregated.at("lat")), (std::vector<double>{20, 30}));
  EXPECT_EQ(mean.modes.at("lat"), AggregationMode::mean);
}

TEST(Aggregate, SumIsLinear) {
  TrialExperience e, scaled;
  e.per_vm = {{{"tp", TimeSeries({1, 4, 2})}}, {{"tp", TimeSeries({3, 0, 5})}}};
  scaled.per_vm = {{{"tp", TimeSeries({2.5, 10, 5})}}, {{"tp", TimeSeries({7.5, 0, 12.5})}}};
  const auto a = values_of(aggregate_trial(e).aggregated.at("tp"));
  const auto b = values_of(aggregate_trial(scaled).aggregated.at("tp"));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 2.5 * a[i], 1e-12);
}

TEST(Aggregate, RejectsMisalignedVms) {
  TrialExperience e;
  e.per_vm = {{{"tp", TimeSeries(1, 1, {1, 2})}}, {{"tp", TimeSeries(2, 1, {1, 2})}}};
  EXPECT_THROW(aggregate_trial(e), std::invalid_argument);
}

TEST(Match, IdenticalSliceIsFullMatch) {
  const auto fp = wave(60);
  const auto agg = single_vm({{"tp", fp.series("tp", 11, 40)}, {"lat", fp.series("lat", 11, 40)}});
  const auto c = match_fingerprint(agg, fp, {11, 40});
  EXPECT_NEAR(c.mean_correlation, 1.0, 1e-12);
  EXPECT_NEAR(c.mean_nrmse, 0.0, 1e-12);
  EXPECT_EQ(c.verdict, Verdict::full_match);
}

TEST(Match, OffsetBeyondThresholdIsPartial) {
  const auto fp = wave(30);
  const auto slice = fp.series("tp", 1, 30);
  const double range = slice.max() - slice.min();
  const double offset = 1.5 * range;
  std::vector<double> shifted;
  for (double x : slice.values()) shifted.push_back(x + offset);
  const auto agg = single_vm({{"tp", TimeSeries(shifted)}});
  const auto c = match_fingerprint(agg, fp, {1, 30});
  EXPECT_NEAR(c.mean_correlation, 1.0, 1e-12);
  EXPECT_NEAR(c.mean_nrmse, offset / range, 1e-12);
  EXPECT_EQ(c.verdict, Verdict::partial_match);
}

TEST(Match, MeansArePerQosAverages) {
  const auto fp = wave(30);
  std::vector<double> noisy;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 2);
  const auto tp = fp.series("tp", 1, 30);
  for (double x : tp.values()) noisy.push_back(x + n(rng));
  const auto agg = single_vm({{"tp", TimeSeries(noisy)}, {"lat", fp.series("lat", 1, 30)}});
  const auto c = match_fingerprint(agg, fp, {1, 30});
  EXPECT_NEAR(c.mean_correlation, (c.per_qos_correlation.at("tp") + c.per_qos_correlation.at("lat")) / 2, 1e-15);
  EXPECT_NEAR(c.mean_nrmse, (c.per_qos_nrmse.at("tp") + c.per_qos_nrmse.at("lat")) / 2, 1e-15);
}

TEST(Match, DegenerateCorrelationRecordedAsZero) {
  const PerformanceFingerprint fp("p", 5, {{"avail", {{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}}}});
  const auto agg = single_vm({{"avail", TimeSeries({1, 1, 1, 1, 1})}});
  const auto c = match_fingerprint(agg, fp, {1, 5});
  EXPECT_EQ(c.per_qos_correlation.at("avail"), 0.0);
  EXPECT_EQ(c.degenerate_qos.count("avail"), 1u);
  EXPECT_EQ(c.verdict, Verdict::partial_match);
}

TEST(Match, MissingQosAndCoverage) {
  const auto fp = wave(30);
  EXPECT_THROW(match_fingerprint(single_vm({{"iops", TimeSeries({1, 2})}}), fp, {1, 2}), MissingQos);
  const PerformanceFingerprint partial("p", 30, {{"tp", {{5, 1.0}, {30, 2.0}}}});
  EXPECT_THROW(match_fingerprint(single_vm({{"tp", TimeSeries({1, 2, 3})}}), partial, {1, 3}), OutOfCoverage);
}

TEST(Match, VerdictIgnoresQosOrder) {
  const auto fp = wave(30);
  std::vector<double> bent;
  const auto lat = fp.series("lat", 1, 30);
  for (double x : lat.values()) bent.push_back(x * 1.3);
  const auto a = single_vm({{"tp", fp.series("tp", 1, 30)}, {"lat", TimeSeries(bent)}});
  const auto renamed = PerformanceFingerprint::from_series(
      "p", 30, {{"a_lat", fp.series("lat", 1, 30)}, {"z_tp", fp.series("tp", 1, 30)}});
  const auto b = single_vm({{"z_tp", fp.series("tp", 1, 30)}, {"a_lat", TimeSeries(bent)}});
  const auto ca = match_fingerprint(a, fp, {1, 30});
  const auto cb = match_fingerprint(b, renamed, {1, 30});
  EXPECT_EQ(ca.verdict, cb.verdict);
  EXPECT_NEAR(ca.mean_nrmse, cb.mean_nrmse, 1e-15);
}

TEST(Transform, FixedPointAndMidpoint) {
  const auto fp = wave(20);
  const auto same = single_vm({{"tp", fp.series("tp", 1, 20)}});
  EXPECT_EQ(values_of(transform_experience(same, fp, {1, 20}).aggregated.at("tp")), values_of(fp.series("tp", 1, 20)));

  const PerformanceFingerprint ten("p", 1, {{"tp", {{1, 10.0}}}});
  const auto zero = single_vm({{"tp", TimeSeries({0})}});
  EXPECT_DOUBLE_EQ(transform_experience(zero, ten, {1, 1}).aggregated.at("tp")[0], 5.0);
}

TEST(Transform, HalvesNrmse) {
  const auto fp = wave(40);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0, 8);
  const auto ref = fp.series("tp", 6, 25);
  std::vector<double> trial;
  for (double x : ref.values()) trial.push_back(x + 15 + n(rng));
  const auto agg = single_vm({{"tp", TimeSeries(6, 1, trial)}});
  const auto out = transform_experience(agg, fp, {6, 25});
  EXPECT_NEAR(nrmse(out.aggregated.at("tp"), ref), 0.5 * nrmse(agg.aggregated.at("tp"), ref), 1e-9);
}

TEST(Transform, RepeatedApplicationShrinksGapGeometrically) {
  const auto fp = wave(10);
  const auto ref = fp.series("tp", 1, 10);
  std::vector<double> trial;
  for (double x : ref.values()) trial.push_back(x - 40);
  auto e = single_vm({{"tp", TimeSeries(trial)}});
  for (int n = 1; n <= 4; ++n) {
    e = transform_experience(e, fp, {1, 10});
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(ref[i] - e.aggregated.at("tp")[i], 40.0 / std::pow(2.0, n), 1e-9);
    }
  }
}

TEST(Transform, PerVmSeriesReaggregateToTransformedAggregate) {
  const auto fp = wave(12);
  for (const auto mode : {AggregationMode::sum, AggregationMode::mean}) {
    TrialExperience e;
    e.per_vm = {{{"tp", TimeSeries({50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160})}},
                {{"tp", TimeSeries({5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16})}},
                {{"tp", TimeSeries({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1})}}};
    const auto agg = aggregate_trial(e, AggregationModes{mode, {}});
    const auto out = transform_experience(agg, fp, {1, 12});
    const auto again = aggregate_trial(out, AggregationModes{mode, {}});
    for (std::size_t i = 0; i < 12; ++i) {
      EXPECT_NEAR(again.aggregated.at("tp")[i], out.aggregated.at("tp")[i], 1e-9);
    }
  }
}

TEST(Transform, CorrelationOfMidpointIsMeasured) {
  const auto fp = wave(30);
  const auto ref = fp.series("tp", 1, 30);
  std::vector<double> trial, mid;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    trial.push_back(ref[i] * 0.5 + 30 + 3 * std::cos(static_cast<double>(i)));
    mid.push_back((trial.back() + ref[i]) / 2);
  }
  const auto out = transform_experience(single_vm({{"tp", TimeSeries(trial)}}), fp, {1, 30});
  EXPECT_NEAR(pearson(out.aggregated.at("tp"), ref), pearson(TimeSeries(mid), ref), 1e-12);
}
