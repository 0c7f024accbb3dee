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
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "banding/config.hpp"
#include "banding/edge_extraction.hpp"
#include "banding/image.hpp"
#include "banding/preprocess.hpp"
#include "banding/scoring.hpp"
#include "banding/visibility.hpp"

namespace banding {

struct FrameAnalysis {
  BandingEdgeMap bem;
  BandingVisibilityMap bvm;
  FrameScore score;  // ti is filled in by analyze_video
};

/// Single-frame pipeline: smoothing, gradient, edge map, visibility, pooling.
inline FrameAnalysis analyze_frame(const LumaFrame& frame, const AnalysisConfig& config) {
  const auto smoothed = guided_filter(frame.plane, config.guided_radius, config.guided_eps);
  const auto grad = sobel_gradient(smoothed, config.sobel_scale);
  FrameAnalysis out;
  out.bem = extract_banding_edges(grad, config.edges);
  const auto stats = local_stats(frame.plane, out.bem, config.window);
  if (config.gradient_source == GradientSource::kSmoothed) {
    out.bvm = build_bvm(out.bem, stats, grad.magnitude, config.masking);
  } else {
    const auto original = sobel_gradient(frame.plane, config.sobel_scale);
    out.bvm = build_bvm(out.bem, stats, original.magnitude, config.masking);
  }
  out.score = pool_frame(out.bvm, compute_si(frame.plane), config.pooling);
  out.score.frame_index = frame.frame_index;
  return out;
}

// Receives each frame's analysis in frame order on the calling thread.
using FrameSink = std::function<void(const LumaFrame&, const FrameAnalysis&)>;

/// Scores every frame on `workers` threads, then reduces in frame order.
/// Results do not depend on the worker count.
inline VideoScore analyze_video(const VideoStream& stream, const AnalysisConfig& config,
                                unsigned workers = 1, const FrameSink& sink = {}) {
  stream.validate();
  config.validate();
  workers = std::max(1u, workers);
  const std::size_t n = stream.frame_count();
  const auto ti = temporal_information(stream.frames);
  std::vector<FrameScore> scores(n);

  const std::size_t batch = static_cast<std::size_t>(workers) * 2;
  std::vector<std::optional<FrameAnalysis>> pending(batch);
  for (std::size_t begin = 0; begin < n; begin += batch) {
    const std::size_t end = std::min(n, begin + batch);
    std::atomic<std::size_t> next{begin};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t i = next++; i < end; i = next++) {
        try {
          pending[i - begin] = analyze_frame(stream.frames[i], config);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, end - begin));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = begin; i < end; ++i) {
      auto& analysis = *pending[i - begin];
      analysis.score.ti = ti[i];
      if (sink) sink(stream.frames[i], analysis);
      scores[i] = analysis.score;
      pending[i - begin].reset();
    }
  }
  return score_video(std::move(scores), config.pooling);
}

}  // namespace banding
