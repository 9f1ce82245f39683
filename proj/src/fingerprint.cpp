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

#include "trialsel/fingerprint.hpp"

#include <cmath>
#include <iterator>
#include <stdexcept>

#include "trialsel/error.hpp"

namespace trialsel {

namespace {

void check_window(const TimeSeries& s, TrialWindow window, const std::string& qos) {
  if (s.start() != window.first || s.last_tick() > window.last) {
    throw std::invalid_argument("trial series for '" + qos + "' spans [" + std::to_string(s.start()) +
                                ", " + std::to_string(s.last_tick()) + "], outside window [" +
                                std::to_string(window.first) + ", " + std::to_string(window.last) + "]");
  }
}

const QosSeries& require_aggregate(const TrialExperience& experience) {
  if (experience.aggregated.empty()) {
    throw std::invalid_argument("trial experience has not been aggregated");
  }
  return experience.aggregated;
}

// q + (target - q) / 2 on the grid of q.
TimeSeries halve_gap(const TimeSeries& q, const TimeSeries& target, double target_scale) {
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    out[i] = q[i] + 0.5 * (target[i] * target_scale - q[i]);
  }
  return TimeSeries(q.start(), q.step(), std::move(out));
}

}  // namespace

PerformanceFingerprint::PerformanceFingerprint(std::string provider_id, Tick period,
                                               std::map<std::string, Points> qos)
    : provider_id_(std::move(provider_id)), period_(period), qos_(std::move(qos)) {
  if (period_ < 1) throw std::invalid_argument("fingerprint period must be >= 1");
  for (const auto& [name, pts] : qos_) {
    if (pts.empty()) throw std::invalid_argument("fingerprint QoS '" + name + "' has no points");
    for (const auto& [t, v] : pts) {
      if (t < 1 || t > period_) {
        throw std::invalid_argument("fingerprint QoS '" + name + "' has tick " + std::to_string(t) +
                                    " outside [1, " + std::to_string(period_) + "]");
      }
      if (!std::isfinite(v)) {
        throw std::invalid_argument("fingerprint QoS '" + name + "' has a non-finite value");
      }
    }
  }
}

PerformanceFingerprint PerformanceFingerprint::from_series(std::string provider_id, Tick period,
                                                           const QosSeries& qos) {
  std::map<std::string, Points> pts;
  for (const auto& [name, s] : qos) {
    auto& dst = pts[name];
    for (std::size_t i = 0; i < s.size(); ++i) dst.emplace(s.tick(i), s[i]);
  }
  return PerformanceFingerprint(std::move(provider_id), period, std::move(pts));
}

std::vector<std::string> PerformanceFingerprint::qos_names() const {
  std::vector<std::string> names;
  for (const auto& entry : qos_) names.push_back(entry.first);
  return names;
}

bool PerformanceFingerprint::complete() const {
  for (const auto& entry : qos_) {
    if (static_cast<Tick>(entry.second.size()) != period_) return false;
  }
  return true;
}

std::map<std::string, std::vector<Tick>> PerformanceFingerprint::missing_ticks() const {
  std::map<std::string, std::vector<Tick>> missing;
  for (const auto& [name, pts] : qos_) {
    if (static_cast<Tick>(pts.size()) == period_) continue;
    auto& gaps = missing[name];
    for (Tick t = 1; t <= period_; ++t) {
      if (pts.count(t) == 0) gaps.push_back(t);
    }
  }
  return missing;
}

double PerformanceFingerprint::value_at(const std::string& qos, Tick t) const {
  const auto it = qos_.find(qos);
  if (it == qos_.end()) throw MissingQos(qos, "fingerprint of provider '" + provider_id_ + "'");
  const Points& pts = it->second;

  const auto hi = pts.lower_bound(t);
  if (hi != pts.end() && hi->first == t) return hi->second;
  if (hi == pts.end() || hi == pts.begin()) {
    throw OutOfCoverage("fingerprint of provider '" + provider_id_ + "' has no coverage for '" + qos +
                        "' at tick " + std::to_string(t));
  }
  const auto lo = std::prev(hi);
  const double frac = static_cast<double>(t - lo->first) / static_cast<double>(hi->first - lo->first);
  return lo->second + frac * (hi->second - lo->second);
}

TimeSeries PerformanceFingerprint::sample(const std::string& qos, const TimeSeries& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = value_at(qos, grid.tick(i));
  return TimeSeries(grid.start(), grid.step(), std::move(out));
}

TimeSeries PerformanceFingerprint::series(const std::string& qos, Tick first, Tick last) const {
  if (last < first) throw std::invalid_argument("empty fingerprint range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (Tick t = first; t <= last; ++t) out.push_back(value_at(qos, t));
  return TimeSeries(first, 1, std::move(out));
}

PerformanceFingerprint PerformanceFingerprint::scaled(double factor) const {
  auto pts = qos_;
  for (auto& entry : pts) {
    for (auto& point : entry.second) point.second *= factor;
  }
  return PerformanceFingerprint(provider_id_, period_, std::move(pts));
}

AggregationMode AggregationModes::mode_for(const std::string& qos) const {
  const auto it = per_qos.find(qos);
  return it == per_qos.end() ? default_mode : it->second;
}

TrialExperience aggregate_trial(TrialExperience experience, const AggregationModes& modes) {
  if (experience.per_vm.empty()) throw std::invalid_argument("trial experience has no VMs");
  const QosSeries& first = experience.per_vm.front();
  if (first.empty()) throw std::invalid_argument("trial experience has no QoS series");

  experience.aggregated.clear();
  experience.modes.clear();
  const double vm_count = static_cast<double>(experience.per_vm.size());
  for (const auto& [name, reference] : first) {
    std::vector<double> acc(reference.size(), 0.0);
    for (std::size_t vm = 0; vm < experience.per_vm.size(); ++vm) {
      const auto it = experience.per_vm[vm].find(name);
      if (it == experience.per_vm[vm].end()) {
        throw std::invalid_argument("VM " + std::to_string(vm) + " has no series for '" + name + "'");
      }
      if (!it->second.aligned_with(reference)) {
        throw std::invalid_argument("VM " + std::to_string(vm) + " series for '" + name +
                                    "' is misaligned with VM 0");
      }
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += it->second[i];
    }
    const AggregationMode mode = modes.mode_for(name);
    if (mode == AggregationMode::mean) {
      for (double& v : acc) v /= vm_count;
    }
    experience.aggregated.emplace(name, TimeSeries(reference.start(), reference.step(), std::move(acc)));
    experience.modes.emplace(name, mode);
  }
  for (std::size_t vm = 1; vm < experience.per_vm.size(); ++vm) {
    if (experience.per_vm[vm].size() != first.size()) {
      throw std::invalid_argument("VM " + std::to_string(vm) + " reports a different QoS set");
    }
  }
  return experience;
}

ConfidenceScore match_fingerprint(const TrialExperience& aggregated, const PerformanceFingerprint& fp,
                                  TrialWindow window, Thresholds thresholds) {
  const QosSeries& trial = require_aggregate(aggregated);
  ConfidenceScore score;
  double sum_r = 0.0, sum_e = 0.0;
  for (const auto& [name, observed] : trial) {
    if (!fp.has_qos(name)) throw MissingQos(name, "fingerprint of provider '" + fp.provider_id() + "'");
    check_window(observed, window, name);
    const TimeSeries reference = fp.sample(name, observed);

    double r = 0.0;
    if (observed.size() < 2) {
      score.degenerate_qos.insert(name);
    } else {
      try {
        r = pearson(observed, reference);
      } catch (const DegenerateCorrelation&) {
        score.degenerate_qos.insert(name);
      }
    }
    const double e = nrmse(observed, reference);
    score.per_qos_correlation[name] = r;
    score.per_qos_nrmse[name] = e;
    sum_r += r;
    sum_e += e;
  }
  const auto c = static_cast<double>(trial.size());
  score.mean_correlation = sum_r / c;
  score.mean_nrmse = sum_e / c;
  score.verdict = score.mean_correlation >= thresholds.min_correlation &&
                          score.mean_nrmse <= thresholds.max_nrmse
                      ? Verdict::full_match
                      : Verdict::partial_match;
  return score;
}

TrialExperience transform_experience(const TrialExperience& aggregated, const PerformanceFingerprint& fp,
                                     TrialWindow window) {
  const QosSeries& trial = require_aggregate(aggregated);
  TrialExperience out = aggregated;
  const double vm_count = static_cast<double>(aggregated.per_vm.size());
  for (const auto& [name, observed] : trial) {
    if (!fp.has_qos(name)) throw MissingQos(name, "fingerprint of provider '" + fp.provider_id() + "'");
    check_window(observed, window, name);
    const TimeSeries reference = fp.sample(name, observed);
    out.aggregated.insert_or_assign(name, halve_gap(observed, reference, 1.0));

    const auto mode = aggregated.modes.count(name) ? aggregated.modes.at(name) : AggregationMode::sum;
    const double share = mode == AggregationMode::sum && vm_count > 0 ? 1.0 / vm_count : 1.0;
    for (auto& vm : out.per_vm) {
      const auto it = vm.find(name);
      if (it == vm.end()) continue;
      if (!it->second.aligned_with(observed)) {
        throw std::invalid_argument("VM series for '" + name + "' is misaligned with the aggregate");
      }
      it->second = halve_gap(it->second, reference, share);
    }
  }
  return out;
}

}  // namespace trialsel
