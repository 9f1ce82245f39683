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

#include "trialsel/serialization.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trialsel/csv.hpp"
#include "trialsel/error.hpp"

namespace trialsel::io {

namespace {

json number_map(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, double> number_map_from(const json& j) {
  std::map<std::string, double> m;
  for (const auto& [k, v] : j.items()) m.emplace(k, v.get<double>());
  return m;
}

// Typed access into a config object that reports failures by JSON pointer.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string path_of(const std::string& key) const { return path_ + "/" + key; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const { return j_.at(key); }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j_.items()) {
      if (!allowed.count(item.key())) throw ConfigError(path_of(item.key()), "unknown field");
    }
  }

  ConfigReader child(const std::string& key) const { return ConfigReader(j_.at(key), path_of(key)); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path_of(key), "expected a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(path_of(key), "expected a non-negative integer");
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path_of(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path_of(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path_of(key), "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

AggregationMode aggregation_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected \"sum\" or \"mean\"");
  try {
    return aggregation_from_name(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

QosProfile qos_profile_from(const ConfigReader& r) {
  r.allow_only({"level", "annual_amplitude", "weekly_amplitude", "phase", "sensitivity", "noise_sigma", "trial_bias"});
  if (!r.has("level")) throw ConfigError(r.path_of("level"), "required");
  QosProfile p;
  p.level = r.number("level", 1.0);
  p.annual_amplitude = r.number("annual_amplitude", 0.0);
  p.weekly_amplitude = r.number("weekly_amplitude", 0.0);
  p.phase = r.number("phase", 0.0);
  p.sensitivity = r.number("sensitivity", 0.0);
  p.noise_sigma = r.number("noise_sigma", 0.0);
  p.trial_bias = r.number("trial_bias", 0.0);
  return p;
}

std::vector<ProviderSpec> providers_from(const json& j, const std::string& path) {
  if (j.is_object()) {
    const ConfigReader outer(j, path);
    outer.allow_only({"synthesize"});
    if (!outer.has("synthesize")) throw ConfigError(path, "expected a provider list or {\"synthesize\": {...}}");
    const ConfigReader r = outer.child("synthesize");
    r.allow_only({"count", "seed", "level_step", "annual_amplitude", "weekly_amplitude", "sensitivity",
                  "noise_fraction", "bias_fraction", "base_levels", "horizon"});
    PopulationOptions o;
    o.level_step = r.number("level_step", o.level_step);
    o.annual_amplitude = r.number("annual_amplitude", o.annual_amplitude);
    o.weekly_amplitude = r.number("weekly_amplitude", o.weekly_amplitude);
    o.sensitivity = r.number("sensitivity", o.sensitivity);
    o.noise_fraction = r.number("noise_fraction", o.noise_fraction);
    o.bias_fraction = r.number("bias_fraction", o.bias_fraction);
    o.horizon = r.integer("horizon", o.horizon);
    if (r.has("base_levels")) {
      const ConfigReader levels = r.child("base_levels");
      o.base_levels.clear();
      for (const auto& item : r.raw("base_levels").items()) o.base_levels[item.key()] = levels.number(item.key(), 0.0);
    }
    return synthesize_providers(r.count("count", 10), r.count("seed", 1), o);
  }
  if (!j.is_array()) throw ConfigError(path, "expected an array of providers");
  std::vector<ProviderSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const ConfigReader r(j[i], path + "/" + std::to_string(i));
    r.allow_only({"id", "qos"});
    ProviderSpec spec;
    spec.id = r.text("id", "");
    if (!r.has("qos")) throw ConfigError(r.path_of("qos"), "required");
    const ConfigReader qos = r.child("qos");
    for (const auto& item : r.raw("qos").items()) spec.qos.emplace(item.key(), qos_profile_from(qos.child(item.key())));
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

std::string verdict_name(Verdict v) { return v == Verdict::full_match ? "full_match" : "partial_match"; }

Verdict verdict_from_name(const std::string& name) {
  if (name == "full_match") return Verdict::full_match;
  if (name == "partial_match") return Verdict::partial_match;
  throw std::invalid_argument("unknown verdict '" + name + "'");
}

std::string polarity_name(Polarity p) { return p == Polarity::higher_better ? "higher_better" : "lower_better"; }

Polarity polarity_from_name(const std::string& name) {
  if (name == "higher_better") return Polarity::higher_better;
  if (name == "lower_better") return Polarity::lower_better;
  throw std::invalid_argument("unknown polarity '" + name + "'");
}

std::string aggregation_name(AggregationMode m) { return m == AggregationMode::sum ? "sum" : "mean"; }

AggregationMode aggregation_from_name(const std::string& name) {
  if (name == "sum") return AggregationMode::sum;
  if (name == "mean") return AggregationMode::mean;
  throw std::invalid_argument("unknown aggregation mode '" + name + "'");
}

json to_json(const TimeSeries& s) {
  return json{{"start", s.start()}, {"step", s.step()}, {"values", std::vector<double>(s.values().begin(), s.values().end())}};
}

TimeSeries time_series_from_json(const json& j) {
  return TimeSeries(j.at("start").get<Tick>(), j.at("step").get<Tick>(), j.at("values").get<std::vector<double>>());
}

json to_json(const TrialPlan& plan) {
  json vms = json::array();
  for (std::size_t i = 0; i < plan.per_vm.size(); ++i) {
    const auto& vm = plan.per_vm[i];
    vms.push_back({{"vm", i + 1},
                   {"partition", to_json(vm.partition)},
                   {"trial_workload", to_json(vm.workload.tw)},
                   {"loss", vm.workload.loss},
                   {"sampling_rate", vm.workload.rate},
                   {"feasible", vm.workload.feasible}});
  }
  const auto& c = plan.constraints;
  return json{{"constraints",
               {{"vm_count", c.vm_count}, {"trial_Tr", c.trial_length}, {"period_d", c.stable_period},
                {"slots_k", c.slots_per_period}}},
              {"loss_budget", plan.loss_budget},
              {"repetitions", plan.repetitions},
              {"feasible", plan.feasible()},
              {"total_loss", plan.total_loss()},
              {"vms", vms}};
}

TrialPlan trial_plan_from_json(const json& j) {
  TrialPlan plan;
  const json& c = j.at("constraints");
  plan.constraints = TrialConstraints{c.at("vm_count").get<std::size_t>(), c.at("trial_Tr").get<std::size_t>(),
                                      c.at("period_d").get<std::size_t>(), c.at("slots_k").get<std::size_t>()};
  plan.loss_budget = j.at("loss_budget").get<double>();
  plan.repetitions = j.at("repetitions").get<std::size_t>();
  for (const json& vm : j.at("vms")) {
    plan.per_vm.push_back(VmTrial{time_series_from_json(vm.at("partition")),
                                  TrialWorkload{time_series_from_json(vm.at("trial_workload")), vm.at("loss").get<double>(),
                                                vm.at("sampling_rate").get<std::size_t>(), vm.at("feasible").get<bool>()}});
  }
  return plan;
}

json to_json(const PerformanceFingerprint& fp) {
  json qos = json::object();
  for (const auto& [name, pts] : fp.points()) {
    json arr = json::array();
    for (const auto& [t, v] : pts) arr.push_back(json::array({t, v}));
    qos[name] = std::move(arr);
  }
  return json{{"provider_id", fp.provider_id()}, {"period_T", fp.period()}, {"qos", qos}};
}

PerformanceFingerprint fingerprint_from_json(const json& j) {
  std::map<std::string, PerformanceFingerprint::Points> qos;
  for (const auto& [name, arr] : j.at("qos").items()) {
    auto& pts = qos[name];
    for (const json& pair : arr) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("fingerprint QoS '" + name + "' entries must be [tick, value] pairs");
      }
      if (!pts.emplace(pair[0].get<Tick>(), pair[1].get<double>()).second) {
        throw ParseError("fingerprint QoS '" + name + "' repeats tick " + pair[0].dump());
      }
    }
  }
  return PerformanceFingerprint(j.at("provider_id").get<std::string>(), j.at("period_T").get<Tick>(), std::move(qos));
}

std::vector<PerformanceFingerprint> fingerprints_from_json(const json& j) {
  std::vector<PerformanceFingerprint> out;
  if (j.is_array()) {
    for (const json& doc : j) out.push_back(fingerprint_from_json(doc));
  } else {
    out.push_back(fingerprint_from_json(j));
  }
  if (out.empty()) throw ParseError("no fingerprints in document");
  return out;
}

json to_json(const ConfidenceScore& c) {
  return json{{"mean_correlation", c.mean_correlation},
              {"mean_nrmse", c.mean_nrmse},
              {"per_qos_correlation", number_map(c.per_qos_correlation)},
              {"per_qos_nrmse", number_map(c.per_qos_nrmse)},
              {"degenerate_qos", c.degenerate_qos},
              {"verdict", verdict_name(c.verdict)}};
}

ConfidenceScore confidence_from_json(const json& j) {
  ConfidenceScore c;
  c.mean_correlation = j.at("mean_correlation").get<double>();
  c.mean_nrmse = j.at("mean_nrmse").get<double>();
  c.per_qos_correlation = number_map_from(j.at("per_qos_correlation"));
  c.per_qos_nrmse = number_map_from(j.at("per_qos_nrmse"));
  c.degenerate_qos = j.at("degenerate_qos").get<std::set<std::string>>();
  c.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  return c;
}

json to_json(const SelectionReport& r) {
  json ranked = json::array();
  for (const auto& s : r.ranked) {
    ranked.push_back({{"rank", s.rank},
                      {"provider_id", s.provider_id},
                      {"total_distance", s.total_distance},
                      {"per_qos_distance", number_map(s.per_qos_distance)},
                      {"confidence", s.confidence ? to_json(*s.confidence) : json(nullptr)}});
  }
  json polarity = json::object();
  for (const auto& [q, p] : r.polarity) polarity[q] = polarity_name(p);
  return json{{"ranked", ranked}, {"excluded", r.excluded}, {"polarity", polarity}};
}

SelectionReport selection_report_from_json(const json& j) {
  SelectionReport r;
  for (const json& s : j.at("ranked")) {
    ProviderScore score;
    score.rank = s.at("rank").get<std::size_t>();
    score.provider_id = s.at("provider_id").get<std::string>();
    score.total_distance = s.at("total_distance").get<double>();
    score.per_qos_distance = number_map_from(s.at("per_qos_distance"));
    if (!s.at("confidence").is_null()) score.confidence = confidence_from_json(s.at("confidence"));
    r.ranked.push_back(std::move(score));
  }
  r.excluded = j.at("excluded").get<std::map<std::string, std::string>>();
  for (const auto& [q, p] : j.at("polarity").items()) r.polarity.emplace(q, polarity_from_name(p.get<std::string>()));
  return r;
}

json to_json(const ExperimentReport& r) {
  json providers = json::array();
  for (const auto& p : r.providers) {
    providers.push_back({{"provider_id", p.provider_id},
                         {"confidence", to_json(p.confidence)},
                         {"transformed", p.transformed},
                         {"fingerprint_complete", p.fingerprint_complete},
                         {"nrmse_without", number_map(p.nrmse_without)},
                         {"nrmse_with", number_map(p.nrmse_with)},
                         {"mean_nrmse_without", p.mean_nrmse_without},
                         {"mean_nrmse_with", p.mean_nrmse_with},
                         {"actual_distance", number_map(p.actual_distance)},
                         {"actual_total_distance", p.actual_total_distance}});
  }
  return json{{"rng_seed", r.rng_seed},
              {"consumer_count", r.consumer_count},
              {"new_consumer", r.new_consumer},
              {"requirement_provider", r.requirement_provider},
              {"plan", {{"feasible", r.plan_feasible}, {"total_loss", r.plan_total_loss}}},
              {"providers", providers},
              {"ranking_with_transformation", to_json(r.ranking_with)},
              {"ranking_without_transformation", to_json(r.ranking_without)},
              {"ground_truth_best", r.ground_truth_best},
              {"best_ranked_first_with", r.best_ranked_first_with},
              {"best_ranked_first_without", r.best_ranked_first_without},
              {"mean_nrmse_with", r.mean_nrmse_with},
              {"mean_nrmse_without", r.mean_nrmse_without}};
}

ExperimentReport experiment_report_from_json(const json& j) {
  ExperimentReport r;
  r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  r.consumer_count = j.at("consumer_count").get<std::size_t>();
  r.new_consumer = j.at("new_consumer").get<std::size_t>();
  r.requirement_provider = j.at("requirement_provider").get<std::string>();
  r.plan_feasible = j.at("plan").at("feasible").get<bool>();
  r.plan_total_loss = j.at("plan").at("total_loss").get<double>();
  for (const json& p : j.at("providers")) {
    ProviderOutcome o;
    o.provider_id = p.at("provider_id").get<std::string>();
    o.confidence = confidence_from_json(p.at("confidence"));
    o.transformed = p.at("transformed").get<bool>();
    o.fingerprint_complete = p.at("fingerprint_complete").get<bool>();
    o.nrmse_without = number_map_from(p.at("nrmse_without"));
    o.nrmse_with = number_map_from(p.at("nrmse_with"));
    o.mean_nrmse_without = p.at("mean_nrmse_without").get<double>();
    o.mean_nrmse_with = p.at("mean_nrmse_with").get<double>();
    o.actual_distance = number_map_from(p.at("actual_distance"));
    o.actual_total_distance = p.at("actual_total_distance").get<double>();
    r.providers.push_back(std::move(o));
  }
  r.ranking_with = selection_report_from_json(j.at("ranking_with_transformation"));
  r.ranking_without = selection_report_from_json(j.at("ranking_without_transformation"));
  r.ground_truth_best = j.at("ground_truth_best").get<std::string>();
  r.best_ranked_first_with = j.at("best_ranked_first_with").get<bool>();
  r.best_ranked_first_without = j.at("best_ranked_first_without").get<bool>();
  r.mean_nrmse_with = j.at("mean_nrmse_with").get<double>();
  r.mean_nrmse_without = j.at("mean_nrmse_without").get<double>();
  return r;
}

json to_json(const ExperimentConfig& c) {
  json providers = json::array();
  for (const auto& p : c.providers) {
    json qos = json::object();
    for (const auto& [name, q] : p.qos) {
      qos[name] = {{"level", q.level},
                   {"annual_amplitude", q.annual_amplitude},
                   {"weekly_amplitude", q.weekly_amplitude},
                   {"phase", q.phase},
                   {"sensitivity", q.sensitivity},
                   {"noise_sigma", q.noise_sigma},
                   {"trial_bias", q.trial_bias}};
    }
    providers.push_back({{"id", p.id}, {"qos", qos}});
  }
  json trace;
  if (c.trace.kind == TraceSource::Kind::file) {
    trace = {{"kind", "file"}, {"path", c.trace.path}, {"columns", c.trace.columns}, {"month_ticks", c.trace.month_ticks}};
  } else {
    trace = {{"kind", "synthetic"},
             {"consumers", c.trace.consumers},
             {"base_level", c.trace.base_level},
             {"level_spread", c.trace.level_spread},
             {"daily_variation", c.trace.daily_variation},
             {"month_ticks", c.trace.month_ticks}};
  }
  json per_qos = json::object();
  for (const auto& [q, m] : c.aggregation.per_qos) per_qos[q] = aggregation_name(m);
  json withheld = json::array();
  for (const auto& [a, b] : c.withheld_fingerprint_ticks) withheld.push_back(json::array({a, b}));
  return json{{"rng_seed", c.rng_seed},
              {"horizon_T", c.horizon},
              {"trial_Tr", c.trial_length},
              {"vm_count", c.vm_count},
              {"period_d", c.stable_period},
              {"slots_k", c.slots_per_period},
              {"loss_budget", c.loss_budget},
              {"thresholds", {{"r", c.thresholds.min_correlation}, {"e", c.thresholds.max_nrmse}}},
              {"replication_jitter", c.replication_jitter},
              {"new_consumer", c.new_consumer},
              {"requirement_provider", c.requirement_provider},
              {"trial_start", c.trial_start},
              {"aggregation", {{"default", aggregation_name(c.aggregation.default_mode)}, {"per_qos", per_qos}}},
              {"withheld_fingerprint_ticks", withheld},
              {"normalize_distance", c.normalize_distance},
              {"jobs", c.jobs},
              {"trace", trace},
              {"providers", providers}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  const ConfigReader r(j, "");
  r.allow_only({"rng_seed", "horizon_T", "trial_Tr", "vm_count", "period_d", "slots_k", "loss_budget", "thresholds",
                "replication_jitter", "new_consumer", "requirement_provider", "trial_start", "aggregation",
                "withheld_fingerprint_ticks", "normalize_distance", "jobs", "trace", "providers"});
  ExperimentConfig c;
  c.rng_seed = r.count("rng_seed", c.rng_seed);
  c.horizon = r.count("horizon_T", c.horizon);
  c.trial_length = r.count("trial_Tr", c.trial_length);
  c.vm_count = r.count("vm_count", c.vm_count);
  c.stable_period = r.count("period_d", c.stable_period);
  c.slots_per_period = r.count("slots_k", c.slots_per_period);
  c.loss_budget = r.number("loss_budget", c.loss_budget);
  if (r.has("thresholds")) {
    const ConfigReader t = r.child("thresholds");
    t.allow_only({"r", "e"});
    c.thresholds.min_correlation = t.number("r", c.thresholds.min_correlation);
    c.thresholds.max_nrmse = t.number("e", c.thresholds.max_nrmse);
  }
  c.replication_jitter = r.number("replication_jitter", c.replication_jitter);
  c.new_consumer = r.count("new_consumer", c.new_consumer);
  c.requirement_provider = r.text("requirement_provider", c.requirement_provider);
  c.trial_start = r.integer("trial_start", c.trial_start);
  if (r.has("aggregation")) {
    const ConfigReader a = r.child("aggregation");
    a.allow_only({"default", "per_qos"});
    if (a.has("default")) c.aggregation.default_mode = aggregation_at(a.raw("default"), a.path_of("default"));
    if (a.has("per_qos")) {
      const ConfigReader per = a.child("per_qos");
      for (const auto& item : a.raw("per_qos").items()) {
        c.aggregation.per_qos[item.key()] = aggregation_at(item.value(), per.path_of(item.key()));
      }
    }
  }
  if (r.has("withheld_fingerprint_ticks")) {
    const json& w = r.raw("withheld_fingerprint_ticks");
    if (!w.is_array()) throw ConfigError(r.path_of("withheld_fingerprint_ticks"), "expected [[first, last], ...]");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& range = w[i];
      if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() || !range[1].is_number_integer()) {
        throw ConfigError(r.path_of("withheld_fingerprint_ticks") + "/" + std::to_string(i), "expected [first, last]");
      }
      c.withheld_fingerprint_ticks.emplace_back(range[0].get<Tick>(), range[1].get<Tick>());
    }
  }
  c.normalize_distance = r.boolean("normalize_distance", c.normalize_distance);
  c.jobs = r.count("jobs", c.jobs);
  if (r.has("trace")) {
    const ConfigReader t = r.child("trace");
    const std::string kind = t.text("kind", "synthetic");
    c.trace.month_ticks = t.count("month_ticks", 0);
    if (kind == "file") {
      t.allow_only({"kind", "path", "columns", "month_ticks"});
      c.trace.kind = TraceSource::Kind::file;
      c.trace.path = t.text("path", "");
      if (t.has("columns")) {
        const json& cols = t.raw("columns");
        if (!cols.is_array()) throw ConfigError(t.path_of("columns"), "expected an array of column names");
        for (std::size_t i = 0; i < cols.size(); ++i) {
          if (!cols[i].is_string()) throw ConfigError(t.path_of("columns") + "/" + std::to_string(i), "expected a string");
          c.trace.columns.push_back(cols[i].get<std::string>());
        }
      }
    } else if (kind == "synthetic") {
      t.allow_only({"kind", "consumers", "base_level", "level_spread", "daily_variation", "month_ticks"});
      c.trace.consumers = t.count("consumers", c.trace.consumers);
      c.trace.base_level = t.number("base_level", c.trace.base_level);
      c.trace.level_spread = t.number("level_spread", c.trace.level_spread);
      c.trace.daily_variation = t.number("daily_variation", c.trace.daily_variation);
    } else {
      throw ConfigError(t.path_of("kind"), "expected \"synthetic\" or \"file\"");
    }
  }
  if (!r.has("providers")) throw ConfigError("/providers", "required");
  c.providers = providers_from(r.raw("providers"), "/providers");
  c.validate();
  return c;
}

json to_json(const std::vector<ProviderTrial>& trials) {
  json arr = json::array();
  for (const auto& t : trials) {
    json vms = json::array();
    for (std::size_t i = 0; i < t.experience.per_vm.size(); ++i) {
      json qos = json::object();
      for (const auto& [name, s] : t.experience.per_vm[i]) {
        qos[name] = std::vector<double>(s.values().begin(), s.values().end());
      }
      json vm{{"qos", qos}};
      if (i < t.trial_workloads.size() && t.trial_workloads[i]) vm["trial_workload"] = *t.trial_workloads[i];
      vms.push_back(std::move(vm));
    }
    arr.push_back({{"provider_id", t.provider_id},
                   {"window_start", t.window_start},
                   {"trial_Tr", t.trial_length},
                   {"period_d", t.stable_period},
                   {"vms", vms}});
  }
  return json{{"trials", arr}};
}

std::vector<ProviderTrial> trials_from_json(const json& j) {
  std::vector<ProviderTrial> out;
  for (const json& t : j.at("trials")) {
    ProviderTrial trial;
    trial.provider_id = t.at("provider_id").get<std::string>();
    trial.window_start = t.value("window_start", Tick{1});
    trial.trial_length = t.at("trial_Tr").get<std::size_t>();
    trial.stable_period = t.value("period_d", std::size_t{1});
    if (trial.stable_period == 0 || trial.trial_length % trial.stable_period != 0) {
      throw ParseError("trial for '" + trial.provider_id + "': period_d must divide trial_Tr");
    }
    for (const json& vm : t.at("vms")) {
      QosSeries qos;
      for (const auto& [name, values] : vm.at("qos").items()) {
        qos.emplace(name, TimeSeries(trial.window_start, static_cast<Tick>(trial.stable_period),
                                     values.get<std::vector<double>>()));
      }
      trial.experience.per_vm.push_back(std::move(qos));
      if (vm.contains("trial_workload")) {
        trial.trial_workloads.emplace_back(vm.at("trial_workload").get<std::vector<double>>());
      } else {
        trial.trial_workloads.emplace_back(std::nullopt);
      }
    }
    if (trial.experience.per_vm.empty()) throw ParseError("trial for '" + trial.provider_id + "' has no VMs");
    out.push_back(std::move(trial));
  }
  if (out.empty()) throw ParseError("no trials in document");
  return out;
}

std::vector<RankingRow> ranking_rows(const SelectionReport& report) {
  std::vector<RankingRow> rows;
  for (const auto& s : report.ranked) {
    RankingRow row{s.rank, s.provider_id, s.total_distance, std::nullopt, std::nullopt, std::nullopt};
    if (s.confidence) {
      row.mean_correlation = s.confidence->mean_correlation;
      row.mean_nrmse = s.confidence->mean_nrmse;
      row.verdict = s.confidence->verdict;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ranking_csv(std::ostream& out, const std::vector<RankingRow>& rows) {
  out << "rank,provider_id,total_distance,mean_correlation,mean_nrmse,verdict\n";
  for (const auto& row : rows) {
    out << row.rank << ',' << row.provider_id << ',' << csv::format_double(row.total_distance) << ','
        << (row.mean_correlation ? csv::format_double(*row.mean_correlation) : "") << ','
        << (row.mean_nrmse ? csv::format_double(*row.mean_nrmse) : "") << ','
        << (row.verdict ? verdict_name(*row.verdict) : "") << '\n';
  }
}

void write_ranking_csv(std::ostream& out, const SelectionReport& report) {
  write_ranking_csv(out, ranking_rows(report));
}

std::vector<RankingRow> read_ranking_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != "rank,provider_id,total_distance,mean_correlation,mean_nrmse,verdict") {
    throw ParseError(source, 1, "unexpected ranking header");
  }
  std::vector<RankingRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != 6) throw ParseError(source, line_no, "expected 6 cells");
    RankingRow row;
    const auto rank = csv::parse_int(cells[0]);
    const auto total = csv::parse_double(cells[2]);
    if (!rank || *rank < 1 || !total) throw ParseError(source, line_no, "bad rank or total_distance");
    row.rank = static_cast<std::size_t>(*rank);
    row.provider_id = std::string(cells[1]);
    row.total_distance = *total;
    if (!cells[3].empty()) row.mean_correlation = csv::parse_double(cells[3]);
    if (!cells[4].empty()) row.mean_nrmse = csv::parse_double(cells[4]);
    if (!cells[5].empty()) {
      try {
        row.verdict = verdict_from_name(std::string(cells[5]));
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, line_no, e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ConsumerRequirements read_requirements_csv(std::istream& in, const std::string& source) {
  auto table = csv::read_series_table(in, source);
  ConsumerRequirements req;
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    if (!req.per_qos.emplace(table.names[i], std::move(table.series[i])).second) {
      throw ParseError(source, 1, "duplicate QoS column '" + table.names[i] + "'");
    }
  }
  return req;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace trialsel::io
