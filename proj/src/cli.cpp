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

#include "trialsel/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "parallel.hpp"
#include "trialsel/csv.hpp"
#include "trialsel/error.hpp"
#include "trialsel/fingerprint.hpp"
#include "trialsel/predictor.hpp"
#include "trialsel/selector.hpp"
#include "trialsel/serialization.hpp"
#include "trialsel/simharness.hpp"
#include "trialsel/trialplan.hpp"

namespace trialsel::cli {

namespace fs = std::filesystem;

namespace {

LongTermWorkload read_workload(const fs::path& path, const std::string& column) {
  auto workloads = ingest_trace(path, column.empty() ? std::vector<std::string>{} : std::vector<std::string>{column});
  return std::move(workloads.front());
}

std::string csv_text(const std::string& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

AggregationModes parse_aggregation(const SelectOptions& options) {
  AggregationModes modes;
  modes.default_mode = io::aggregation_from_name(options.aggregate_default);
  for (const auto& spec : options.aggregate) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--aggregate expects qos=sum|mean, got '" + spec + "'");
    }
    modes.per_qos[spec.substr(0, eq)] = io::aggregation_from_name(spec.substr(eq + 1));
  }
  return modes;
}

// The predictor reads class levels and trial geometry from a plan; build one
// from the observation document when no plan file is supplied.
TrialPlan plan_for_trial(const io::ProviderTrial& trial, const std::optional<TrialPlan>& plan) {
  const std::size_t vms = trial.experience.per_vm.size();
  if (plan) {
    if (plan->per_vm.size() != vms) {
      throw std::invalid_argument("plan has " + std::to_string(plan->per_vm.size()) + " VMs, trial has " +
                                  std::to_string(vms));
    }
    if (plan->constraints.trial_length != trial.trial_length || plan->constraints.stable_period != trial.stable_period) {
      throw std::invalid_argument("plan trial length or period does not match the trial observations");
    }
  }
  TrialPlan out;
  out.constraints = TrialConstraints{vms, trial.trial_length, trial.stable_period, 1};
  out.repetitions = out.constraints.repetitions();
  for (std::size_t j = 0; j < vms; ++j) {
    if (j < trial.trial_workloads.size() && trial.trial_workloads[j]) {
      TimeSeries tw(*trial.trial_workloads[j]);
      out.constraints.slots_per_period = std::max(out.constraints.slots_per_period, tw.size());
      out.per_vm.push_back(VmTrial{tw, TrialWorkload{tw, 0.0, 1, true}});
    } else if (plan) {
      out.constraints.slots_per_period = plan->constraints.slots_per_period;
      out.per_vm.push_back(plan->per_vm[j]);
    } else {
      throw std::invalid_argument("VM " + std::to_string(j + 1) + " has no trial_workload and no --plan was given");
    }
  }
  return out;
}

}  // namespace

int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto workload = read_workload(options.workload, options.column);
    const TrialConstraints constraints{options.vms, options.trial_days, options.period_d, options.slots_k};
    const auto plan = build_trial_plan(workload, constraints, LossBudget(options.loss_budget));
    const auto path = options.out_dir / "trial_plan.json";
    io::write_text_file(path, io::dump(io::to_json(plan)));

    out << "planned " << plan.per_vm.size() << " VMs x " << plan.repetitions << " periods, total loss "
        << csv::format_double(plan.total_loss()) << " -> " << path.string() << '\n';
    if (!plan.feasible()) {
      for (std::size_t j = 0; j < plan.per_vm.size(); ++j) {
        const auto& w = plan.per_vm[j].workload;
        if (!w.feasible) {
          err << "VM " << j + 1 << ": loss " << csv::format_double(w.loss) << " exceeds budget "
              << csv::format_double(options.loss_budget) << " at the finest rate " << w.rate << '\n';
        }
      }
      return kExitInfeasible;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "plan: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_select(const SelectOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto workload = read_workload(options.workload, options.column);
    const auto trials = io::trials_from_json(io::read_json_file(options.trials));
    const auto fingerprints = io::fingerprints_from_json(io::read_json_file(options.fingerprints));
    ConsumerRequirements requirements = [&] {
      std::ifstream in(options.requirements);
      if (!in) throw ParseError("cannot open " + options.requirements.string());
      return io::read_requirements_csv(in, options.requirements.string());
    }();
    for (const auto& qos : options.lower_better) requirements.polarity[qos] = Polarity::lower_better;
    for (const auto& entry : requirements.per_qos) requirements.polarity.emplace(entry.first, Polarity::higher_better);

    std::optional<TrialPlan> plan;
    if (options.plan) plan = io::trial_plan_from_json(io::read_json_file(*options.plan));
    const AggregationModes modes = parse_aggregation(options);
    const Thresholds thresholds{options.r_threshold, options.e_threshold};

    std::map<std::string, const PerformanceFingerprint*> by_id;
    for (const auto& fp : fingerprints) by_id.emplace(fp.provider_id(), &fp);

    struct Outcome {
      std::optional<ProviderCandidate> candidate;
      std::string problem;
    };
    std::vector<Outcome> outcomes(trials.size());
    detail::parallel_for(trials.size(), options.jobs, [&](std::size_t i) {
      const auto& trial = trials[i];
      const auto fp = by_id.find(trial.provider_id);
      if (fp == by_id.end()) {
        outcomes[i].problem = "no fingerprint for provider";
        return;
      }
      try {
        const TrialWindow window{trial.window_start, trial.window_start + static_cast<Tick>(trial.trial_length) - 1};
        const auto trial_plan = plan_for_trial(trial, plan);
        const auto aggregated = aggregate_trial(trial.experience, modes);
        const auto confidence = match_fingerprint(aggregated, *fp->second, window, thresholds);
        const auto& experience = confidence.verdict == Verdict::partial_match
                                     ? transform_experience(aggregated, *fp->second, window)
                                     : aggregated;
        auto prediction = predict_long_term(workload, experience, trial_plan, *fp->second,
                                            PredictOptions{options.strict_zero_reference});
        outcomes[i].candidate = ProviderCandidate{trial.provider_id, std::move(prediction), confidence};
      } catch (const std::exception& e) {
        outcomes[i].problem = e.what();
      }
    });

    std::vector<ProviderCandidate> candidates;
    std::map<std::string, std::string> problems;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].candidate) {
        candidates.push_back(std::move(*outcomes[i].candidate));
      } else {
        problems.emplace(trials[i].provider_id, outcomes[i].problem);
      }
    }
    SelectionReport report = rank_providers(requirements, candidates, !options.raw_distance);
    report.excluded.insert(problems.begin(), problems.end());

    std::vector<std::vector<std::string>> series_rows;
    for (const auto& c : candidates) {
      for (const auto& [qos, s] : c.prediction.per_qos) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          series_rows.push_back({std::to_string(s.tick(i)), c.provider_id, qos, csv::format_double(s[i])});
        }
      }
    }
    std::ostringstream ranking;
    io::write_ranking_csv(ranking, report);
    io::write_text_file(options.out_dir / "selection_report.json", io::dump(io::to_json(report)));
    io::write_text_file(options.out_dir / "ranking.csv", ranking.str());
    io::write_text_file(options.out_dir / "predictions.csv", csv_text("tick,provider_id,qos,predicted", series_rows));

    for (const auto& [id, why] : report.excluded) err << "excluded " << id << ": " << why << '\n';
    if (report.ranked.empty()) {
      err << "select: no provider could be ranked\n";
      return kExitError;
    }
    out << "ranked " << report.ranked.size() << " providers; best: " << report.ranked.front().provider_id << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "select: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_experiment(const ExperimentOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = io::experiment_config_from_json(io::read_json_file(options.config));
    if (options.seed) config.rng_seed = *options.seed;
    if (options.jobs) config.jobs = *options.jobs;
    if (config.trace.kind == TraceSource::Kind::file && fs::path(config.trace.path).is_relative()) {
      config.trace.path = (options.config.parent_path() / config.trace.path).string();
    }
    const auto result = run_experiment(config);
    const auto& report = result.report;

    std::vector<std::vector<std::string>> series_rows, nrmse_rows, distance_rows;
    for (std::size_t p = 0; p < report.providers.size(); ++p) {
      const auto& o = report.providers[p];
      const auto& s = result.series[p];
      for (const auto& [qos, actual] : s.actual) {
        const auto& without = s.predicted_without.at(qos);
        const auto& with = s.predicted_with.at(qos);
        for (std::size_t i = 0; i < actual.size(); ++i) {
          series_rows.push_back({std::to_string(actual.tick(i)), o.provider_id, qos, csv::format_double(actual[i]),
                                 csv::format_double(without[i]), csv::format_double(with[i])});
        }
      }
      nrmse_rows.push_back({o.provider_id, csv::format_double(o.mean_nrmse_without), csv::format_double(o.mean_nrmse_with),
                            csv::format_double(o.confidence.mean_correlation),
                            csv::format_double(o.confidence.mean_nrmse), io::verdict_name(o.confidence.verdict),
                            o.transformed ? "true" : "false"});
      const ProviderScore* predicted = report.ranking_with.find(o.provider_id);
      for (const auto& [qos, actual_d] : o.actual_distance) {
        std::string predicted_d;
        if (predicted && predicted->per_qos_distance.count(qos)) {
          predicted_d = csv::format_double(predicted->per_qos_distance.at(qos));
        }
        distance_rows.push_back({o.provider_id, qos, predicted_d, csv::format_double(actual_d)});
      }
    }

    const auto figures = options.out_dir / "figures";
    io::write_text_file(options.out_dir / "report.json", io::dump(io::to_json(report)));
    io::write_text_file(figures / "prediction_series.csv",
                        csv_text("tick,provider_id,qos,actual,predicted_without,predicted_with", series_rows));
    io::write_text_file(figures / "prediction_nrmse.csv",
                        csv_text("provider_id,nrmse_without,nrmse_with,mean_correlation,mean_nrmse,verdict,transformed",
                                 nrmse_rows));
    io::write_text_file(figures / "qos_distance.csv",
                        csv_text("provider_id,qos,predicted_distance,actual_distance", distance_rows));

    out << "seed " << report.rng_seed << ": selected "
        << (report.ranking_with.ranked.empty() ? "none" : report.ranking_with.ranked.front().provider_id)
        << ", ground-truth best " << report.ground_truth_best << ", mean NRMSE with/without transformation "
        << csv::format_double(report.mean_nrmse_with) << " / " << csv::format_double(report.mean_nrmse_without) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "experiment: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_trace(const TraceOptions& options, std::ostream& out, std::ostream& err) {
  try {
    TraceSource source;
    source.consumers = options.consumers;
    const auto months = synthesize_trace(source, options.ticks, options.seed);
    std::vector<TimeSeries> series;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < months.size(); ++c) {
      series.push_back(replicate_months(months[c], options.months, derive_seed(options.seed, {c}), options.jitter));
      names.push_back("consumer_" + std::to_string(c + 1));
    }
    std::ostringstream os;
    write_trace(os, names, series);
    io::write_text_file(options.out, os.str());
    out << "wrote " << series.front().size() << " ticks x " << names.size() << " consumers -> " << options.out.string()
        << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "trace: " << e.what() << '\n';
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trial planning, fingerprint matching and long-term provider selection"};
  app.require_subcommand(1);

  fs::path default_out = ".";
  if (const char* env = std::getenv(kOutDirEnv); env && *env) default_out = env;

  PlanOptions plan;
  plan.out_dir = default_out;
  auto* plan_cmd = app.add_subcommand("plan", "Compile a workload into a per-VM trial plan");
  plan_cmd->add_option("workload", plan.workload, "Workload CSV (tick,consumer_1,...)")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--column", plan.column, "Consumer column to plan for (default: first)");
  plan_cmd->add_option("--vms", plan.vms, "Trial VMs")->capture_default_str();
  plan_cmd->add_option("--trial-days", plan.trial_days, "Trial length in ticks")->capture_default_str();
  plan_cmd->add_option("--period-d", plan.period_d, "Stable period in ticks")->capture_default_str();
  plan_cmd->add_option("--slots-k", plan.slots_k, "Workload points per period")->capture_default_str();
  plan_cmd->add_option("--loss-budget", plan.loss_budget, "Maximum mean absolute compression loss")->capture_default_str();
  plan_cmd->add_option("--out", plan.out_dir, "Output directory");

  SelectOptions select;
  select.out_dir = default_out;
  std::string plan_path;
  auto* select_cmd = app.add_subcommand("select", "Match trials to fingerprints, predict and rank providers");
  select_cmd->add_option("workload", select.workload, "Workload CSV")->required()->check(CLI::ExistingFile);
  select_cmd->add_option("trials", select.trials, "Trial observations JSON")->required()->check(CLI::ExistingFile);
  select_cmd->add_option("fingerprints", select.fingerprints, "Fingerprints JSON")->required()->check(CLI::ExistingFile);
  select_cmd->add_option("requirements", select.requirements, "Requirements CSV (tick,<qos>,...)")
      ->required()
      ->check(CLI::ExistingFile);
  select_cmd->add_option("--column", select.column, "Workload column (default: first)");
  select_cmd->add_option("--plan", plan_path, "Trial plan JSON supplying trial workloads")->check(CLI::ExistingFile);
  select_cmd->add_option("--r-threshold", select.r_threshold, "Minimum mean correlation")->capture_default_str();
  select_cmd->add_option("--e-threshold", select.e_threshold, "Maximum mean NRMSE")->capture_default_str();
  select_cmd->add_option("--aggregate-default", select.aggregate_default, "sum or mean")->capture_default_str();
  select_cmd->add_option("--aggregate", select.aggregate, "Per-QoS aggregation, e.g. read_latency=mean");
  select_cmd->add_option("--lower-better", select.lower_better, "QoS where lower values are better");
  select_cmd->add_flag("--raw-distance", select.raw_distance, "Use unnormalized RMSE distances");
  select_cmd->add_flag("--strict-zero", select.strict_zero_reference, "Fail on zero fingerprint references");
  select_cmd->add_option("--jobs", select.jobs, "Concurrent provider evaluations")->check(CLI::PositiveNumber);
  select_cmd->add_option("--out", select.out_dir, "Output directory");

  ExperimentOptions experiment;
  experiment.out_dir = default_out;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a simulated selection experiment");
  experiment_cmd->add_option("config", experiment.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  experiment_cmd->add_option("--seed", experiment.seed, "Override rng_seed");
  experiment_cmd->add_option("--jobs", experiment.jobs, "Concurrent provider evaluations")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--out", experiment.out_dir, "Output directory");

  TraceOptions trace;
  auto* trace_cmd = app.add_subcommand("trace", "Write a synthetic workload trace");
  trace_cmd->add_option("--out", trace.out, "Output CSV")->capture_default_str();
  trace_cmd->add_option("--consumers", trace.consumers)->capture_default_str();
  trace_cmd->add_option("--ticks", trace.ticks, "Ticks per month")->capture_default_str();
  trace_cmd->add_option("--months", trace.months, "Months to replicate")->capture_default_str();
  trace_cmd->add_option("--jitter", trace.jitter, "Replication jitter")->capture_default_str();
  trace_cmd->add_option("--seed", trace.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*plan_cmd) return cmd_plan(plan, out, err);
  if (*select_cmd) {
    if (!plan_path.empty()) select.plan = plan_path;
    return cmd_select(select, out, err);
  }
  if (*experiment_cmd) return cmd_experiment(experiment, out, err);
  return cmd_trace(trace, out, err);
}

}  // namespace trialsel::cli
