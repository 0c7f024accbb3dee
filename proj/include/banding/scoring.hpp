// Copyright 2026 The banding-detector Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "banding/error.hpp"
#include "banding/image.hpp"
#include "banding/preprocess.hpp"
#include "banding/visibility.hpp"

namespace banding {

struct PoolingParams {
  double p = 80.0;  // percent of the largest non-zero visibility values kept
  double a_si = 1e-6;
  double b_si = 3.0;
  double a_ti = 2.5e-3;
  double b_ti = 2.0;

  void validate() const {
    if (!(p > 0.0 && p <= 100.0)) throw ConfigError("p must lie in (0, 100]");
    if (!(a_si > 0.0) || !(b_si > 0.0) || !(a_ti > 0.0) || !(b_ti > 0.0)) {
      throw ConfigError("SI/TI transfer constants must be > 0");
    }
  }
};

struct FrameScore {
  std::int64_t frame_index = 0;
  double si = 0.0;
  double ti = 0.0;
  double raw_pooled = 0.0;  // mean of the pooled visibility values
  std::size_t pooled_count = 0;
  double score = 0.0;       // SI-weighted pooled visibility
};

struct VideoScore {
  double score = 0.0;
  std::vector<FrameScore> frame_scores;
};

namespace detail {

inline double population_stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace detail

// Spatial information: deviation of the raw (unscaled) Sobel magnitude.
inline double compute_si(const Plane<std::uint8_t>& frame) {
  const auto g = sobel_gradient(frame, 1.0);
  return detail::population_stddev(g.magnitude.pixels());
}

// Temporal information: deviation of the absolute frame difference.
inline double compute_ti(const Plane<std::uint8_t>& frame, const Plane<std::uint8_t>& previous) {
  require_same_geometry(frame, previous, "compute_ti");
  std::vector<double> diff(frame.size());
  auto a = frame.pixels();
  auto b = previous.pixels();
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return detail::population_stddev(diff);
}

/// TI for every frame of a sequence. The first frame borrows the forward
/// difference to frame 2; a lone frame gets 0.
inline std::vector<double> temporal_information(std::span<const LumaFrame> frames) {
  std::vector<double> ti(frames.size(), 0.0);
  for (std::size_t n = 1; n < frames.size(); ++n) {
    ti[n] = compute_ti(frames[n].plane, frames[n - 1].plane);
  }
  if (frames.size() > 1) ti[0] = ti[1];
  return ti;
}

inline double transfer_weight(double x, double a, double b) {
  return std::exp(-a * std::pow(x, b));
}

// Number of values kept when pooling the top p percent of n values.
inline std::size_t pooled_size(std::size_t n, double p) {
  if (n == 0) return 0;
  const double exact = p * static_cast<double>(n) / 100.0;
  const auto k = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

inline FrameScore pool_frame(const BandingVisibilityMap& bvm, double si, const PoolingParams& params) {
  params.validate();
  FrameScore fs;
  fs.si = si;
  auto values = bvm.nonzero();
  if (values.empty()) return fs;
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t k = pooled_size(values.size(), params.p);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += values[i];
  fs.pooled_count = k;
  fs.raw_pooled = sum / static_cast<double>(k);
  fs.score = transfer_weight(si, params.a_si, params.b_si) * fs.raw_pooled;
  return fs;
}

/// Mean over all frames of the TI-weighted frame scores.
inline VideoScore score_video(std::vector<FrameScore> frames, const PoolingParams& params) {
  if (frames.empty()) throw Error("cannot score an empty frame sequence");
  params.validate();
  double acc = 0.0;
  for (const auto& f : frames) acc += transfer_weight(f.ti, params.a_ti, params.b_ti) * f.score;
  VideoScore v;
  v.score = acc / static_cast<double>(frames.size());
  v.frame_scores = std::move(frames);
  return v;
}

}  // namespace banding
