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

#include "trialsel/selector.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace trialsel {

std::vector<std::string> SelectionReport::ranked_order() const {
  std::vector<std::string> order;
  order.reserve(ranked.size());
  for (const auto& s : ranked) order.push_back(s.provider_id);
  return order;
}

const ProviderScore* SelectionReport::find(const std::string& provider_id) const {
  const auto it = std::find_if(ranked.begin(), ranked.end(),
                               [&](const ProviderScore& s) { return s.provider_id == provider_id; });
  return it == ranked.end() ? nullptr : &*it;
}

double qos_distance(const TimeSeries& requirement, const TimeSeries& predicted, bool normalize) {
  if (requirement.size() != predicted.size()) {
    throw std::invalid_argument("qos_distance: length mismatch");
  }
  const double raw = rmse(requirement.values(), predicted.values());
  if (!normalize) return raw;
  const double lo = std::min(requirement.min(), predicted.min());
  const double hi = std::max(requirement.max(), predicted.max());
  // Scaling both series by 1 / (hi - lo) scales the RMSE identically; the
  // shared offset cancels in the differences.
  return hi > lo ? raw / (hi - lo) : 0.0;
}

SelectionReport rank_providers(const ConsumerRequirements& requirements,
                               const std::vector<ProviderCandidate>& candidates, bool normalize) {
  SelectionReport report;
  report.polarity = requirements.polarity;

  for (const auto& candidate : candidates) {
    ProviderScore score{candidate.provider_id, candidate.confidence, {}, 0.0, 0};
    std::string problem;
    for (const auto& [qos, required] : requirements.per_qos) {
      const auto it = candidate.prediction.per_qos.find(qos);
      if (it == candidate.prediction.per_qos.end()) {
        problem = "no prediction for required QoS '" + qos + "'";
        break;
      }
      if (!it->second.aligned_with(required)) {
        problem = "prediction for '" + qos + "' does not cover the requirement horizon";
        break;
      }
      const double d = qos_distance(required, it->second, normalize);
      score.per_qos_distance.emplace(qos, d);
      score.total_distance += d;
    }
    if (!problem.empty()) {
      report.excluded.emplace(candidate.provider_id, problem);
      continue;
    }
    report.ranked.push_back(std::move(score));
  }

  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const ProviderScore& a, const ProviderScore& b) {
                     return std::tie(a.total_distance, a.provider_id) <
                            std::tie(b.total_distance, b.provider_id);
                   });
  for (std::size_t i = 0; i < report.ranked.size(); ++i) report.ranked[i].rank = i + 1;
  return report;
}

}  // namespace trialsel
