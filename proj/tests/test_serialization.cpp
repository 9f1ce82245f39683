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

#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "trialsel/error.hpp"
#include "trialsel/serialization.hpp"

using namespace trialsel;
using io::json;

namespace {

TrialPlan sample_plan() {
  std::vector<double> v(60);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 7) % 13) + 0.125;
  return build_trial_plan(LongTermWorkload(TimeSeries(v)), {3, 10, 2, 5}, LossBudget(2.5));
}

SelectionReport sample_report() {
  ConfidenceScore c;
  c.mean_correlation = 0.8125;
  c.mean_nrmse = 0.3;
  c.per_qos_correlation = {{"tp", 0.8125}};
  c.per_qos_nrmse = {{"tp", 0.3}};
  c.degenerate_qos = {"avail"};
  c.verdict = Verdict::full_match;
  SelectionReport r;
  r.ranked.push_back(ProviderScore{"a", c, {{"tp", 0.1}}, 0.1, 1});
  r.ranked.push_back(ProviderScore{"b", std::nullopt, {{"tp", 0.7}}, 0.7, 2});
  r.excluded = {{"c", "no prediction for required QoS 'tp'"}};
  r.polarity = {{"tp", Polarity::higher_better}};
  return r;
}

}  // namespace

TEST(Json, TimeSeriesRoundTrip) {
  const TimeSeries s(3, 2, {0.1, 1e300, -4});
  EXPECT_EQ(io::time_series_from_json(io::to_json(s)), s);
}

TEST(Json, PlanRoundTripIsFixedPoint) {
  const auto plan = sample_plan();
  const json j = io::to_json(plan);
  EXPECT_EQ(j.at("constraints").at("trial_Tr"), 10);
  EXPECT_EQ(j.at("vms").size(), 3u);
  const auto back = io::trial_plan_from_json(j);
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j));
  EXPECT_EQ(back.per_vm[1].workload.tw, plan.per_vm[1].workload.tw);
}

TEST(Json, FingerprintDocumentShape) {
  const PerformanceFingerprint fp("p7", 4, {{"tp", {{1, 2.5}, {4, 3.0}}}});
  const json j = io::to_json(fp);
  EXPECT_EQ(j.at("provider_id"), "p7");
  EXPECT_EQ(j.at("period_T"), 4);
  EXPECT_EQ(j.at("qos").at("tp"), json::parse("[[1, 2.5], [4, 3.0]]"));
  EXPECT_EQ(io::fingerprint_from_json(j), fp);
  EXPECT_EQ(io::fingerprints_from_json(json::array({j, j})).size(), 2u);
  EXPECT_EQ(io::fingerprints_from_json(j).size(), 1u);
}

TEST(Json, FingerprintRejectsMalformed) {
  EXPECT_ANY_THROW(io::fingerprint_from_json(json::parse(R"({"provider_id":"p","period_T":3,"qos":{"tp":[[1]]}})")));
  EXPECT_ANY_THROW(io::fingerprint_from_json(json::parse(R"({"provider_id":"p","period_T":3,"qos":{"tp":[[9,1]]}})")));
  EXPECT_ANY_THROW(io::fingerprints_from_json(json::array()));
}

TEST(Json, SelectionReportRoundTrip) {
  const auto r = sample_report();
  const json j = io::to_json(r);
  EXPECT_TRUE(j.at("ranked")[1].at("confidence").is_null());
  const auto back = io::selection_report_from_json(j);
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j));
  EXPECT_EQ(back.ranked_order(), r.ranked_order());
  EXPECT_EQ(back.ranked[0].confidence, r.ranked[0].confidence);
}

TEST(Json, TrialsRoundTrip) {
  io::ProviderTrial t;
  t.provider_id = "p1";
  t.window_start = 5;
  t.trial_length = 4;
  t.stable_period = 2;
  t.trial_workloads = {std::vector<double>{3, 4}, std::nullopt};
  t.experience.per_vm = {{{"tp", TimeSeries(5, 2, {1, 2})}}, {{"tp", TimeSeries(5, 2, {3, 4})}}};
  const json j = io::to_json(std::vector<io::ProviderTrial>{t});
  const auto back = io::trials_from_json(j);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].experience.per_vm[1].at("tp"), t.experience.per_vm[1].at("tp"));
  EXPECT_FALSE(back[0].trial_workloads[1]);
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j));
  EXPECT_THROW(io::trials_from_json(json::parse(R"({"trials":[]})")), ParseError);
}

TEST(Json, ExperimentReportRoundTrip) {
  ExperimentReport r;
  r.rng_seed = 9;
  r.consumer_count = 3;
  r.requirement_provider = "a";
  ProviderOutcome o;
  o.provider_id = "a";
  o.nrmse_with = {{"tp", 0.25}};
  o.nrmse_without = {{"tp", 0.5}};
  o.mean_nrmse_with = 0.25;
  o.mean_nrmse_without = 0.5;
  o.actual_distance = {{"tp", 0}};
  r.providers.push_back(o);
  r.ranking_with = sample_report();
  r.ranking_without = sample_report();
  r.ground_truth_best = "a";
  const json j = io::to_json(r);
  EXPECT_TRUE(j.contains("ranking_with_transformation"));
  EXPECT_EQ(io::dump(io::to_json(io::experiment_report_from_json(j))), io::dump(j));
}

TEST(Config, ParsesSynthesizedProviders) {
  const auto c = io::experiment_config_from_json(json::parse(R"({
    "rng_seed": 3, "horizon_T": 120, "vm_count": 4,
    "aggregation": {"default": "sum", "per_qos": {"read_latency": "mean"}},
    "trace": {"kind": "synthetic", "consumers": 4, "month_ticks": 30},
    "providers": {"synthesize": {"count": 3, "seed": 2, "horizon": 120}}
  })"));
  EXPECT_EQ(c.rng_seed, 3u);
  EXPECT_EQ(c.providers.size(), 3u);
  EXPECT_EQ(c.aggregation.mode_for("read_latency"), AggregationMode::mean);
  EXPECT_EQ(c.aggregation.mode_for("throughput"), AggregationMode::sum);
  const auto again = io::experiment_config_from_json(io::to_json(c));
  EXPECT_EQ(io::dump(io::to_json(again)), io::dump(io::to_json(c)));
}

TEST(Config, ErrorsNameTheField) {
  const auto path_of = [](const char* text) {
    try {
      io::experiment_config_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return e.path();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(path_of(R"({"providers": {"synthesize": {}}, "vm_count": -2})"), "/vm_count");
  EXPECT_EQ(path_of(R"({"providers": {"synthesize": {}}, "bogus": 1})"), "/bogus");
  EXPECT_EQ(path_of(R"({"providers": {"synthesize": {}}, "thresholds": {"r": "high"}})"), "/thresholds/r");
  EXPECT_EQ(path_of(R"({"horizon_T": 360})"), "/providers");
  EXPECT_EQ(path_of(R"({"providers": [{"id": "x", "qos": {"tp": {"level": "a"}}}]})"), "/providers/0/qos/tp/level");
}

TEST(RankingCsv, RoundTripIsFixedPoint) {
  std::stringstream a;
  io::write_ranking_csv(a, sample_report());
  const auto rows = io::read_ranking_csv(a, "mem");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].verdict, Verdict::full_match);
  EXPECT_FALSE(rows[1].mean_correlation);
  EXPECT_EQ(rows, io::ranking_rows(sample_report()));
  std::stringstream b;
  io::write_ranking_csv(b, rows);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RankingCsv, RejectsBadInput) {
  std::stringstream bad_header("rank,id\n");
  EXPECT_THROW(io::read_ranking_csv(bad_header, "mem"), ParseError);
  std::stringstream bad_row("rank,provider_id,total_distance,mean_correlation,mean_nrmse,verdict\n1,a,x,,,\n");
  EXPECT_THROW(io::read_ranking_csv(bad_row, "mem"), ParseError);
}

TEST(RequirementsCsv, Parses) {
  std::stringstream in("tick,tp,lat\n1,100,5\n2,110,6\n");
  const auto req = io::read_requirements_csv(in, "mem");
  EXPECT_EQ(req.per_qos.at("lat")[1], 6.0);
  EXPECT_EQ(req.per_qos.at("tp").size(), 2u);
}

TEST(Files, ReadJsonReportsParseErrors) {
  const auto dir = oracle::scratch_dir("ser_files");
  io::write_text_file(dir / "empty.json", "");
  EXPECT_THROW(io::read_json_file(dir / "empty.json"), ParseError);
  EXPECT_THROW(io::read_json_file(dir / "missing.json"), ParseError);
  io::write_text_file(dir / "nested/ok.json", "{\"a\": 1}");
  EXPECT_EQ(io::read_json_file(dir / "nested/ok.json").at("a"), 1);
}
