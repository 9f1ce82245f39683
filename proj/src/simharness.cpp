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

#include "trialsel/simharness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <tuple>

#include "trialsel/csv.hpp"
#include "trialsel/error.hpp"
#include "parallel.hpp"

namespace trialsel {

namespace {

constexpr double kTwoPi = 6.283185307179586;

enum Stream : std::uint64_t {
  kTrace = 1,
  kReplicate = 2,
  kTruth = 3,
  kTrial = 4,
  kPopulation = 5,
};

// FNV-1a; std::hash is not stable across standard libraries.
std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <typename Fn>
auto in_stage(const std::string& provider, const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("provider '" + provider + "', stage " + stage + ": " + e.what());
  }
}

double lookup(const std::map<std::string, double>& m, const std::string& key) {
  const auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

bool is_latency(const std::string& qos) { return qos.find("latency") != std::string::npos; }

std::map<std::string, double> nrmse_per_qos(const QosSeries& predicted, const QosSeries& actual) {
  std::map<std::string, double> out;
  for (const auto& [qos, truth] : actual) {
    const auto it = predicted.find(qos);
    if (it != predicted.end()) out.emplace(qos, nrmse(it->second, truth));
  }
  return out;
}

double mean_of(const std::map<std::string, double>& m) {
  if (m.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& entry : m) sum += entry.second;
  return sum / static_cast<double>(m.size());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  const auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(base);
  for (const auto p : parts) push(p);
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::vector<LongTermWorkload> ingest_trace(std::istream& in, const std::string& source,
                                           const std::vector<std::string>& columns,
                                           std::size_t min_rows) {
  auto table = csv::read_series_table(in, source, columns, /*non_negative=*/true);
  if (table.series.front().size() < min_rows) {
    throw ParseError(source + ": trace has " + std::to_string(table.series.front().size()) +
                     " rows; at least " + std::to_string(min_rows) + " are required");
  }
  std::vector<LongTermWorkload> out;
  out.reserve(table.series.size());
  for (auto& s : table.series) out.emplace_back(std::move(s));
  return out;
}

std::vector<LongTermWorkload> ingest_trace(const std::filesystem::path& path,
                                           const std::vector<std::string>& columns,
                                           std::size_t min_rows) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file " + path.string());
  return ingest_trace(in, path.string(), columns, min_rows);
}

std::vector<std::string> trace_columns(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) throw ParseError("cannot read trace header from " + path.string());
  const auto header = csv::split(line);
  if (header.empty() || header[0] != "tick") throw ParseError(path.string(), 1, "header must start with 'tick'");
  return std::vector<std::string>(header.begin() + 1, header.end());
}

void write_trace(std::ostream& out, const std::vector<std::string>& names,
                 const std::vector<TimeSeries>& series) {
  if (names.size() != series.size() || series.empty()) {
    throw std::invalid_argument("write_trace: one name per series required");
  }
  for (const auto& s : series) {
    if (!s.aligned_with(series.front())) throw std::invalid_argument("write_trace: misaligned series");
  }
  out << "tick";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < series.front().size(); ++i) {
    out << series.front().tick(i);
    for (const auto& s : series) out << ',' << csv::format_double(s[i]);
    out << '\n';
  }
}

TimeSeries replicate_months(const TimeSeries& month, std::size_t months, std::uint64_t seed,
                            double jitter) {
  if (months == 0) throw std::invalid_argument("months must be >= 1");
  if (!(jitter >= 0.0 && jitter < 1.0)) throw std::invalid_argument("jitter must be in [0, 1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(1.0 - jitter, 1.0 + jitter);
  std::vector<double> out;
  out.reserve(month.size() * months);
  for (std::size_t r = 0; r < months; ++r) {
    for (const double v : month.values()) out.push_back(jitter > 0.0 ? v * factor(rng) : v);
  }
  return TimeSeries(month.start(), month.step(), std::move(out));
}

QosSeries observe_performance(const SyntheticProvider& provider, const TimeSeries& workload,
                              bool in_trial, std::uint64_t seed) {
  const PerformanceFingerprint& base = provider.base_fingerprint;
  QosSeries out;
  for (const auto& qos : base.qos_names()) {
    const double sensitivity = lookup(provider.workload_sensitivity, qos);
    const double sigma = lookup(provider.noise_sigma, qos);
    const double bias = in_trial ? lookup(provider.trial_isolation_bias, qos) : 0.0;
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma for '" + qos + "' is negative");

    std::mt19937_64 rng(derive_seed(seed, {stable_hash(qos)}));
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    std::vector<double> values(workload.size());
    for (std::size_t i = 0; i < workload.size(); ++i) {
      const Tick t = workload.tick(i);
      if (t < 1) throw std::invalid_argument("workload tick " + std::to_string(t) + " is before tick 1");
      const Tick cyclic = (t - 1) % base.period() + 1;
      double v = base.value_at(qos, cyclic) + sensitivity * (workload[i] - provider.reference_workload) + bias;
      if (sigma > 0.0) v += noise(rng);
      values[i] = v;
    }
    out.emplace(qos, TimeSeries(workload.start(), workload.step(), std::move(values)));
  }
  return out;
}

PerformanceFingerprint build_fingerprint_from_observations(std::string provider_id, Tick period,
                                                           const std::vector<QosSeries>& observations,
                                                           const std::set<Tick>& withheld) {
  if (observations.empty()) throw std::invalid_argument("fingerprint needs at least one consumer");
  const QosSeries& first = observations.front();
  std::map<std::string, PerformanceFingerprint::Points> points;
  for (const auto& [qos, reference] : first) {
    std::vector<double> sum(reference.size(), 0.0);
    for (std::size_t c = 0; c < observations.size(); ++c) {
      const auto it = observations[c].find(qos);
      if (it == observations[c].end()) {
        throw std::invalid_argument("consumer " + std::to_string(c) + " has no '" + qos + "' series");
      }
      if (!it->second.aligned_with(reference)) {
        throw std::invalid_argument("consumer " + std::to_string(c) + " '" + qos +
                                    "' series is misaligned with consumer 0");
      }
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += it->second[i];
    }
    auto& dst = points[qos];
    for (std::size_t i = 0; i < sum.size(); ++i) {
      const Tick t = reference.tick(i);
      if (withheld.count(t)) continue;
      dst.emplace(t, sum[i] / static_cast<double>(observations.size()));
    }
  }
  return PerformanceFingerprint(std::move(provider_id), period, std::move(points));
}

SyntheticProvider make_provider(const ProviderSpec& spec, Tick horizon, double reference_workload) {
  QosSeries base;
  SyntheticProvider provider{spec.id, PerformanceFingerprint(spec.id, horizon, {}), {}, {}, {}, reference_workload};
  for (const auto& [qos, profile] : spec.qos) {
    std::vector<double> values(static_cast<std::size_t>(horizon));
    for (Tick t = 1; t <= horizon; ++t) {
      const double x = static_cast<double>(t - 1);
      values[static_cast<std::size_t>(t - 1)] =
          profile.level * (1.0 + profile.annual_amplitude * std::sin(kTwoPi * x / static_cast<double>(horizon) + profile.phase) +
                           profile.weekly_amplitude * std::sin(kTwoPi * x / 7.0 + profile.phase));
    }
    base.emplace(qos, TimeSeries(std::move(values)));
    provider.workload_sensitivity[qos] = profile.sensitivity;
    provider.noise_sigma[qos] = profile.noise_sigma;
    provider.trial_isolation_bias[qos] = profile.trial_bias;
  }
  provider.base_fingerprint = PerformanceFingerprint::from_series(spec.id, horizon, base);
  return provider;
}

std::vector<ProviderSpec> synthesize_providers(std::size_t count, std::uint64_t seed,
                                               const PopulationOptions& options) {
  std::mt19937_64 rng(derive_seed(seed, {kPopulation}));
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_real_distribution<double> wobble(0.8, 1.2);

  std::vector<ProviderSpec> providers;
  for (std::size_t i = 0; i < count; ++i) {
    ProviderSpec spec;
    spec.id = (i + 1 < 10 ? "p0" : "p") + std::to_string(i + 1);
    for (const auto& [qos, base_level] : options.base_levels) {
      QosProfile p;
      p.level = base_level * (1.0 + options.level_step * static_cast<double>(i));
      p.annual_amplitude = options.annual_amplitude * wobble(rng);
      p.weekly_amplitude = options.weekly_amplitude * wobble(rng);
      p.phase = phase(rng);
      // Load hurts: throughput drops and latency rises with demand, and an
      // isolated trial environment flatters both.
      const double direction = is_latency(qos) ? 1.0 : -1.0;
      p.sensitivity = direction * options.sensitivity * p.level;
      p.trial_bias = -direction * options.bias_fraction * p.level;
      spec.qos.emplace(qos, p);
    }
    if (options.noise_fraction > 0.0) {
      const auto provider = make_provider(spec, options.horizon, 0.0);
      for (auto& [qos, p] : spec.qos) {
        const auto s = provider.base_fingerprint.series(qos, 1, options.horizon);
        p.noise_sigma = options.noise_fraction * (s.max() - s.min());
      }
    }
    providers.push_back(std::move(spec));
  }
  return providers;
}

std::vector<TimeSeries> synthesize_trace(const TraceSource& source, std::size_t month_ticks,
                                         std::uint64_t seed) {
  if (month_ticks == 0) throw std::invalid_argument("month length must be >= 1");
  std::mt19937_64 rng(derive_seed(seed, {kTrace}));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  std::vector<TimeSeries> out;
  for (std::size_t c = 0; c < source.consumers; ++c) {
    const double level = source.base_level * (1.0 + source.level_spread * unit(rng));
    const double shift = phase(rng);
    std::vector<double> month(month_ticks);
    for (std::size_t t = 0; t < month_ticks; ++t) {
      const double rhythm = 1.0 + source.daily_variation * std::sin(kTwoPi * static_cast<double>(t) / 7.0 + shift);
      month[t] = std::max(0.0, std::round(level * rhythm * (1.0 + 0.1 * unit(rng))));
    }
    out.emplace_back(std::move(month));
  }
  return out;
}

TrialConstraints ExperimentConfig::constraints() const {
  return TrialConstraints{vm_count, trial_length, stable_period, slots_per_period};
}

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("/horizon_T", "must be >= 1");
  if (trial_length < 1) throw ConfigError("/trial_Tr", "must be >= 1");
  if (stable_period < 1 || stable_period > trial_length) {
    throw ConfigError("/period_d", "must be in [1, trial_Tr]");
  }
  if (trial_length % stable_period != 0) throw ConfigError("/period_d", "must divide trial_Tr");
  if (slots_per_period < 1) throw ConfigError("/slots_k", "must be >= 1");
  if (vm_count < 1 || vm_count > horizon) throw ConfigError("/vm_count", "must be in [1, horizon_T]");
  if (!(loss_budget >= 0.0)) throw ConfigError("/loss_budget", "must be >= 0");
  if (!(replication_jitter >= 0.0 && replication_jitter < 1.0)) {
    throw ConfigError("/replication_jitter", "must be in [0, 1)");
  }
  if (!(thresholds.max_nrmse >= 0.0)) throw ConfigError("/thresholds/e", "must be >= 0");
  if (!(thresholds.min_correlation >= -1.0 && thresholds.min_correlation <= 1.0)) {
    throw ConfigError("/thresholds/r", "must be in [-1, 1]");
  }
  if (trial_start < 1 || trial_start + static_cast<Tick>(trial_length) - 1 > static_cast<Tick>(horizon)) {
    throw ConfigError("/trial_start", "trial window must lie inside [1, horizon_T]");
  }
  for (std::size_t i = 0; i < withheld_fingerprint_ticks.size(); ++i) {
    const auto [a, b] = withheld_fingerprint_ticks[i];
    if (a < 1 || b < a || b > static_cast<Tick>(horizon)) {
      throw ConfigError("/withheld_fingerprint_ticks/" + std::to_string(i), "range must lie inside [1, horizon_T]");
    }
  }
  if (jobs < 1) throw ConfigError("/jobs", "must be >= 1");
  if (trace.kind == TraceSource::Kind::synthetic) {
    if (trace.consumers < 1) throw ConfigError("/trace/consumers", "must be >= 1");
    if (new_consumer >= trace.consumers) throw ConfigError("/new_consumer", "must name an existing consumer");
  } else if (trace.path.empty()) {
    throw ConfigError("/trace/path", "must be set for file traces");
  }
  if (providers.empty()) throw ConfigError("/providers", "at least one provider is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < providers.size(); ++i) {
    const auto path = "/providers/" + std::to_string(i);
    if (providers[i].id.empty()) throw ConfigError(path + "/id", "must not be empty");
    if (!ids.insert(providers[i].id).second) throw ConfigError(path + "/id", "duplicate provider id");
    if (providers[i].qos.empty()) throw ConfigError(path + "/qos", "at least one QoS is required");
    for (const auto& [qos, p] : providers[i].qos) {
      if (!(p.noise_sigma >= 0.0)) throw ConfigError(path + "/qos/" + qos + "/noise_sigma", "must be >= 0");
    }
  }
  if (!requirement_provider.empty() && !ids.count(requirement_provider)) {
    throw ConfigError("/requirement_provider", "unknown provider '" + requirement_provider + "'");
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto horizon = config.horizon;
  const std::size_t month_ticks = std::min(
      config.trace.month_ticks ? config.trace.month_ticks : config.trial_length, horizon);

  std::vector<TimeSeries> raw;
  if (config.trace.kind == TraceSource::Kind::file) {
    for (auto& w : ingest_trace(config.trace.path, config.trace.columns, month_ticks)) {
      raw.push_back(std::move(w.series));
    }
    if (config.new_consumer >= raw.size()) {
      throw ConfigError("/new_consumer", "trace has only " + std::to_string(raw.size()) + " consumers");
    }
  } else {
    raw = synthesize_trace(config.trace, month_ticks, config.rng_seed);
  }

  // Long-term workloads on ticks 1..T.
  std::vector<LongTermWorkload> workloads;
  double reference_sum = 0.0;
  for (std::size_t c = 0; c < raw.size(); ++c) {
    const auto values = raw[c].values();
    std::vector<double> long_term;
    if (values.size() >= horizon) {
      long_term.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(horizon));
    } else {
      const TimeSeries month(std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(month_ticks)));
      const auto months = (horizon + month_ticks - 1) / month_ticks;
      const auto replicated = replicate_months(month, months, derive_seed(config.rng_seed, {kReplicate, c}),
                                               config.replication_jitter);
      long_term.assign(replicated.values().begin(), replicated.values().begin() + static_cast<std::ptrdiff_t>(horizon));
    }
    for (const double v : long_term) reference_sum += v;
    workloads.emplace_back(TimeSeries(std::move(long_term)));
  }
  const double reference = reference_sum / static_cast<double>(workloads.size() * horizon);
  const LongTermWorkload& consumer = workloads[config.new_consumer];

  const TrialPlan plan = build_trial_plan(consumer, config.constraints(), LossBudget(config.loss_budget));
  const TrialWindow window{config.trial_start, config.trial_start + static_cast<Tick>(config.trial_length) - 1};
  const std::size_t observations_per_vm = config.trial_length / config.stable_period;

  std::set<Tick> withheld;
  for (const auto& [a, b] : config.withheld_fingerprint_ticks) {
    for (Tick t = a; t <= b; ++t) withheld.insert(t);
  }

  const std::size_t provider_count = config.providers.size();
  std::vector<ProviderOutcome> outcomes(provider_count);
  std::vector<ProviderSeries> series(provider_count);
  std::vector<PredictedPerformance> with_path(provider_count), without_path(provider_count);

  detail::parallel_for(provider_count, config.jobs, [&](std::size_t p) {
    const ProviderSpec& spec = config.providers[p];
    const std::uint64_t key = stable_hash(spec.id);
    const auto provider = make_provider(spec, static_cast<Tick>(horizon), reference);

    std::vector<QosSeries> truth(workloads.size());
    const auto fp = in_stage(spec.id, "fingerprint", [&] {
      for (std::size_t c = 0; c < workloads.size(); ++c) {
        truth[c] = observe_performance(provider, workloads[c].series, false,
                                       derive_seed(config.rng_seed, {kTruth, key, c}));
      }
      return build_fingerprint_from_observations(spec.id, static_cast<Tick>(horizon), truth, withheld);
    });

    auto trial = in_stage(spec.id, "trial", [&] {
      TrialExperience experience;
      for (std::size_t j = 0; j < plan.per_vm.size(); ++j) {
        const TimeSeries demand(config.trial_start, static_cast<Tick>(config.stable_period),
                                std::vector<double>(observations_per_vm, plan.per_vm[j].workload.tw.mean()));
        experience.per_vm.push_back(
            observe_performance(provider, demand, true, derive_seed(config.rng_seed, {kTrial, key, j})));
      }
      return aggregate_trial(std::move(experience), config.aggregation);
    });

    ProviderOutcome& outcome = outcomes[p];
    outcome.provider_id = spec.id;
    outcome.fingerprint_complete = fp.complete();
    outcome.confidence = in_stage(spec.id, "match", [&] {
      return match_fingerprint(trial, fp, window, config.thresholds);
    });
    outcome.transformed = outcome.confidence.verdict == Verdict::partial_match;

    without_path[p] = in_stage(spec.id, "predict", [&] { return predict_long_term(consumer, trial, plan, fp); });
    with_path[p] = outcome.transformed ? in_stage(spec.id, "transform", [&] {
      return predict_long_term(consumer, transform_experience(trial, fp, window), plan, fp);
    })
                                       : without_path[p];

    const QosSeries& actual = truth[config.new_consumer];
    outcome.nrmse_without = nrmse_per_qos(without_path[p].per_qos, actual);
    outcome.nrmse_with = nrmse_per_qos(with_path[p].per_qos, actual);
    outcome.mean_nrmse_without = mean_of(outcome.nrmse_without);
    outcome.mean_nrmse_with = mean_of(outcome.nrmse_with);
    series[p] = ProviderSeries{actual, without_path[p].per_qos, with_path[p].per_qos};
  });

  ExperimentReport report;
  report.rng_seed = config.rng_seed;
  report.consumer_count = workloads.size();
  report.new_consumer = config.new_consumer;
  report.requirement_provider =
      config.requirement_provider.empty() ? config.providers.front().id : config.requirement_provider;
  report.plan_feasible = plan.feasible();
  report.plan_total_loss = plan.total_loss();

  std::size_t requirement_index = 0;
  for (std::size_t p = 0; p < provider_count; ++p) {
    if (config.providers[p].id == report.requirement_provider) requirement_index = p;
  }
  const ConsumerRequirements requirements{series[requirement_index].actual, {}};

  std::vector<ProviderCandidate> with_candidates, without_candidates;
  for (std::size_t p = 0; p < provider_count; ++p) {
    ProviderOutcome& outcome = outcomes[p];
    for (const auto& [qos, required] : requirements.per_qos) {
      const auto it = series[p].actual.find(qos);
      if (it == series[p].actual.end()) continue;
      const double d = qos_distance(required, it->second, config.normalize_distance);
      outcome.actual_distance.emplace(qos, d);
      outcome.actual_total_distance += d;
    }
    with_candidates.push_back({outcome.provider_id, with_path[p], outcome.confidence});
    without_candidates.push_back({outcome.provider_id, without_path[p], outcome.confidence});
  }
  report.ranking_with = rank_providers(requirements, with_candidates, config.normalize_distance);
  report.ranking_without = rank_providers(requirements, without_candidates, config.normalize_distance);

  const auto best = std::min_element(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) {
    return std::tie(a.actual_total_distance, a.provider_id) < std::tie(b.actual_total_distance, b.provider_id);
  });
  report.ground_truth_best = best->provider_id;
  report.best_ranked_first_with =
      !report.ranking_with.ranked.empty() && report.ranking_with.ranked.front().provider_id == best->provider_id;
  report.best_ranked_first_without = !report.ranking_without.ranked.empty() &&
                                     report.ranking_without.ranked.front().provider_id == best->provider_id;

  for (const auto& o : outcomes) {
    report.mean_nrmse_with += o.mean_nrmse_with;
    report.mean_nrmse_without += o.mean_nrmse_without;
  }
  report.mean_nrmse_with /= static_cast<double>(provider_count);
  report.mean_nrmse_without /= static_cast<double>(provider_count);
  report.providers = std::move(outcomes);

  return ExperimentResult{std::move(report), std::move(series)};
}

}  // namespace trialsel
