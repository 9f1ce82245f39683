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

#include "trialsel/predictor.hpp"

#include <cmath>
#include <stdexcept>

#include "trialsel/error.hpp"

namespace trialsel {

std::size_t nearest_trial_workload(double demand, std::span<const TrialClass> classes) {
  if (classes.empty()) throw std::invalid_argument("no trial workloads to match against");
  std::size_t best = 0;
  double best_gap = std::abs(demand - classes[0].level);
  for (std::size_t i = 1; i < classes.size(); ++i) {
    const double gap = std::abs(demand - classes[i].level);
    if (gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  return best;
}

Tick map_trial_tick(Tick t_prime, Tick trial_length) {
  if (trial_length < 1) throw std::invalid_argument("trial length must be >= 1");
  if (t_prime < 1) throw std::invalid_argument("tick " + std::to_string(t_prime) + " is before tick 1");
  return (t_prime - 1) % trial_length + 1;
}

double relative_weight(const TimeSeries& fp_qos, Tick t_prime, Tick t_i) {
  const auto at = [&](Tick t) {
    const auto i = fp_qos.index_of(t);
    if (!i) throw OutOfCoverage("fingerprint series has no value at tick " + std::to_string(t));
    return fp_qos[*i];
  };
  const double reference = at(t_i);
  const double target = at(t_prime);
  if (reference == 0.0) {
    throw ZeroReference("fingerprint value at trial tick " + std::to_string(t_i) + " is zero");
  }
  return target / reference;
}

std::vector<TrialClass> trial_classes(const TrialExperience& trial, const TrialPlan& plan) {
  if (trial.per_vm.size() != plan.per_vm.size()) {
    throw std::invalid_argument("trial has " + std::to_string(trial.per_vm.size()) +
                                " VMs but the plan has " + std::to_string(plan.per_vm.size()));
  }
  std::vector<TrialClass> classes;
  classes.reserve(plan.per_vm.size());
  for (std::size_t i = 0; i < plan.per_vm.size(); ++i) {
    classes.push_back(TrialClass{plan.per_vm[i].workload.tw.mean(), trial.per_vm[i]});
  }
  return classes;
}

PredictedPerformance predict_long_term(const LongTermWorkload& workload, const TrialExperience& trial,
                                       const TrialPlan& plan, const PerformanceFingerprint& fp,
                                       PredictOptions options) {
  const auto classes = trial_classes(trial, plan);
  if (classes.empty() || classes.front().observations.empty()) {
    throw std::invalid_argument("trial experience has no observations");
  }
  const auto trial_length = static_cast<Tick>(plan.constraints.trial_length);
  const auto period = static_cast<Tick>(plan.constraints.stable_period);
  const TimeSeries& demand = workload.series;

  // Class choice depends only on the workload, so resolve it once per tick.
  std::vector<std::size_t> nearest(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) nearest[i] = nearest_trial_workload(demand[i], classes);

  PredictedPerformance out;
  for (const auto& entry : classes.front().observations) {
    const std::string& qos = entry.first;
    std::vector<double> values(demand.size());
    std::vector<TickProvenance> trail(demand.size());

    for (std::size_t i = 0; i < demand.size(); ++i) {
      const Tick t_prime = demand.tick(i);
      const Tick t_i = map_trial_tick(t_prime, trial_length);
      const TrialClass& cls = classes[nearest[i]];

      const auto obs_it = cls.observations.find(qos);
      if (obs_it == cls.observations.end()) {
        throw MissingObservation("trial class " + std::to_string(nearest[i]) + " has no '" + qos +
                                 "' observations");
      }
      const TimeSeries& obs = obs_it->second;
      const auto slot = static_cast<std::size_t>((t_i + period - 1) / period) - 1;
      if (slot >= obs.size()) {
        throw MissingObservation("trial class " + std::to_string(nearest[i]) + " has no '" + qos +
                                 "' observation for trial tick " + std::to_string(t_i));
      }
      const Tick window_tick = obs.start() + t_i - 1;

      TickProvenance prov{nearest[i], t_i, 1.0, false};
      const double reference = fp.value_at(qos, window_tick);
      const double target = fp.value_at(qos, t_prime);
      if (reference == 0.0) {
        if (options.strict_zero_reference) {
          throw ZeroReference("fingerprint '" + qos + "' is zero at tick " + std::to_string(window_tick));
        }
        prov.weight_substituted = true;
        out.warnings.push_back("zero fingerprint reference for '" + qos + "' at tick " +
                               std::to_string(window_tick) + "; relative weight set to 1");
      } else {
        prov.relative_weight = target / reference;
      }
      values[i] = prov.relative_weight * obs[slot];
      trail[i] = prov;
    }
    out.per_qos.emplace(qos, TimeSeries(demand.start(), demand.step(), std::move(values)));
    out.provenance.emplace(qos, std::move(trail));
  }
  return out;
}

}  // namespace trialsel
