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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trialsel/fingerprint.hpp"
#include "trialsel/predictor.hpp"
#include "trialsel/timeseries.hpp"

namespace trialsel {

enum class Polarity { higher_better, lower_better };

struct ConsumerRequirements {
  QosSeries per_qos;
  // Annotation only; distances treat every QoS symmetrically.
  std::map<std::string, Polarity> polarity;
};

struct ProviderCandidate {
  std::string provider_id;
  PredictedPerformance prediction;
  std::optional<ConfidenceScore> confidence;
};

struct ProviderScore {
  std::string provider_id;
  std::optional<ConfidenceScore> confidence;
  std::map<std::string, double> per_qos_distance;
  double total_distance = 0.0;
  std::size_t rank = 0;
};

struct SelectionReport {
  // Ascending total distance; rank i + 1 at index i.
  std::vector<ProviderScore> ranked;
  // Providers left out of the ranking, with the reason.
  std::map<std::string, std::string> excluded;
  std::map<std::string, Polarity> polarity;

  std::vector<std::string> ranked_order() const;
  const ProviderScore* find(const std::string& provider_id) const;
};

// RMSE between requirement and prediction. With `normalize`, both series are
// min-max scaled by the range of their union first, which bounds the result
// to [0, 1].
double qos_distance(const TimeSeries& requirement, const TimeSeries& predicted, bool normalize = true);

// Scores each candidate against the requirements and sorts ascending by the
// sum of per-QoS distances; equal totals fall back to provider id order.
SelectionReport rank_providers(const ConsumerRequirements& requirements,
                               const std::vector<ProviderCandidate>& candidates, bool normalize = true);

}  // namespace trialsel
