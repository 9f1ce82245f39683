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

#include "trialsel/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trialsel/error.hpp"

namespace trialsel {

TimeSeries::TimeSeries(Tick start, Tick step, std::vector<double> values)
    : start_(start), step_(step), values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("time series must not be empty");
  if (step_ < 1) throw std::invalid_argument("time series step must be >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("non-finite value at tick " + std::to_string(tick(i)));
    }
  }
}

TimeSeries::TimeSeries(std::vector<double> values) : TimeSeries(1, 1, std::move(values)) {}

std::optional<std::size_t> TimeSeries::index_of(Tick t) const noexcept {
  if (t < start_ || (t - start_) % step_ != 0) return std::nullopt;
  const auto i = static_cast<std::size_t>((t - start_) / step_);
  if (i >= values_.size()) return std::nullopt;
  return i;
}

bool TimeSeries::aligned_with(const TimeSeries& other) const noexcept {
  return start_ == other.start_ && step_ == other.step_ && values_.size() == other.values_.size();
}

double TimeSeries::mean() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double TimeSeries::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double TimeSeries::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

LossBudget::LossBudget(double loss) : max_loss(loss) {
  if (!(loss >= 0.0)) throw std::invalid_argument("loss budget must be >= 0");
}

LossBudget LossBudget::unlimited() { return LossBudget(std::numeric_limits<double>::infinity()); }

TimeSeries paa_compress(const TimeSeries& series, std::size_t segment_width) {
  const std::size_t m = series.size();
  if (segment_width == 0 || segment_width > m) {
    throw std::invalid_argument("segment width must be in [1, " + std::to_string(m) + "], got " +
                                std::to_string(segment_width));
  }
  const auto values = series.values();
  std::vector<double> out;
  out.reserve((m + segment_width - 1) / segment_width);
  for (std::size_t begin = 0; begin < m; begin += segment_width) {
    const std::size_t end = std::min(begin + segment_width, m);
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += values[i];
    out.push_back(sum / static_cast<double>(end - begin));
  }
  return TimeSeries(series.start(), series.step() * static_cast<Tick>(segment_width), std::move(out));
}

TimeSeries paa_decompress(const TimeSeries& compressed, std::size_t original_length,
                          Tick original_step) {
  const std::size_t k = compressed.size();
  if (original_length < k) {
    throw std::invalid_argument("original length " + std::to_string(original_length) +
                                " is shorter than the compressed series (" + std::to_string(k) + ")");
  }
  if (original_step < 1 || compressed.step() % original_step != 0) {
    throw std::invalid_argument("compressed step is not a multiple of the original step");
  }
  const auto width = static_cast<std::size_t>(compressed.step() / original_step);
  if ((k - 1) * width >= original_length) {
    throw std::invalid_argument("compressed anchors do not fit in the original length");
  }

  const auto anchors = compressed.values();
  std::vector<double> out(original_length);
  const auto w = static_cast<double>(width);
  for (std::size_t i = 0; i < original_length; ++i) {
    const std::size_t block = i / width;
    if (block + 1 < k) {
      const double frac = static_cast<double>(i - block * width) / w;
      out[i] = anchors[block] + frac * (anchors[block + 1] - anchors[block]);
    } else if (k == 1) {
      out[i] = anchors[0];
    } else {
      // Past the last anchor: continue the line through the last two.
      const double slope = (anchors[k - 1] - anchors[k - 2]) / w;
      out[i] = anchors[k - 1] + slope * static_cast<double>(i - (k - 1) * width);
    }
  }
  return TimeSeries(compressed.start(), original_step, std::move(out));
}

double mae_loss(const TimeSeries& original, const TimeSeries& reconstructed) {
  if (original.size() != reconstructed.size()) {
    throw std::invalid_argument("mae_loss: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) sum += std::abs(original[i] - reconstructed[i]);
  return sum / static_cast<double>(original.size());
}

double pearson(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("pearson: need at least two points");

  const double mean_a = a.mean();
  const double mean_b = b.mean();
  double sum_ab = 0.0, sum_a2 = 0.0, sum_b2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sum_ab += da * db;
    sum_a2 += da * da;
    sum_b2 += db * db;
  }
  if (sum_a2 == 0.0 || sum_b2 == 0.0) {
    throw DegenerateCorrelation("pearson: zero-variance series");
  }
  return std::clamp(sum_ab / std::sqrt(sum_a2 * sum_b2), -1.0, 1.0);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rmse: length mismatch");
  if (a.empty()) throw std::invalid_argument("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

double nrmse(const TimeSeries& observed, const TimeSeries& reference) {
  if (observed.size() != reference.size()) throw std::invalid_argument("nrmse: length mismatch");
  const double err = rmse(observed.values(), reference.values());
  const double range = reference.max() - reference.min();
  if (range > 0.0) return err / range;
  const double level = std::abs(reference.mean());
  if (level > 0.0) return err / level;
  return err;
}

}  // namespace trialsel
