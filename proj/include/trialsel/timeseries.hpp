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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace trialsel {

using Tick = std::int64_t;

// Uniformly spaced series of finite values. Ticks are start, start+step, ...
class TimeSeries {
 public:
  TimeSeries(Tick start, Tick step, std::vector<double> values);
  // Ticks 1, 2, ..., values.size().
  explicit TimeSeries(std::vector<double> values);

  Tick start() const noexcept { return start_; }
  Tick step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  Tick tick(std::size_t i) const noexcept { return start_ + static_cast<Tick>(i) * step_; }
  Tick last_tick() const noexcept { return tick(values_.size() - 1); }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::optional<std::size_t> index_of(Tick t) const noexcept;

  // Same tick grid (start, step and length).
  bool aligned_with(const TimeSeries& other) const noexcept;

  double mean() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

  bool operator==(const TimeSeries&) const = default;

 private:
  Tick start_;
  Tick step_;
  std::vector<double> values_;
};

// Maximum acceptable mean absolute error between a workload and its
// compressed-then-reconstructed form.
struct LossBudget {
  double max_loss = 0.0;

  explicit LossBudget(double loss);
  static LossBudget unlimited();
};

// Piecewise aggregate approximation: the mean of each block of
// `segment_width` consecutive points. A shorter final block is averaged over
// its own length. The result's step is the input step times the width.
TimeSeries paa_compress(const TimeSeries& series, std::size_t segment_width);

// Rebuilds `original_length` points on the original grid. Each compressed
// value sits on the first tick of its source block; gaps between anchors are
// linearly interpolated and the tail after the last anchor is linearly
// extrapolated from the last two anchors (held flat when there is only one).
// The block width is compressed.step() / original_step.
TimeSeries paa_decompress(const TimeSeries& compressed, std::size_t original_length,
                          Tick original_step = 1);

double mae_loss(const TimeSeries& original, const TimeSeries& reconstructed);

// Sample Pearson correlation. Throws DegenerateCorrelation when either
// series has zero variance.
double pearson(const TimeSeries& a, const TimeSeries& b);

double rmse(std::span<const double> a, std::span<const double> b);

// RMSE normalized by the reference range, falling back to |mean(reference)|
// and then to the raw RMSE when those are zero.
double nrmse(const TimeSeries& observed, const TimeSeries& reference);

}  // namespace trialsel
