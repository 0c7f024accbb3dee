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
#include <numbers>
#include <string>
#include <vector>

#include "banding/error.hpp"
#include "banding/image.hpp"

namespace banding {

// Real-valued intensity plane on the 0..255 scale.
using SmoothedFrame = Plane<double>;

struct GradientField {
  Plane<double> magnitude;
  Plane<double> orientation;  // radians in (-pi, pi]

  int width() const noexcept { return magnitude.width(); }
  int height() const noexcept { return magnitude.height(); }
};

/// Mean over a (2r+1)x(2r+1) window with replicate padding.
///
/// Separable running sums; cost is independent of the radius.
template <typename T>
Plane<double> box_mean(const Plane<T>& in, int radius) {
  const int w = in.width();
  const int h = in.height();
  const int span = 2 * radius + 1;
  Plane<double> horiz(w, h);
  std::vector<double> line(static_cast<std::size_t>(w + 2 * radius));
  for (int y = 0; y < h; ++y) {
    for (int i = 0; i < w + 2 * radius; ++i) {
      line[i] = static_cast<double>(in.clamped(i - radius, y));
    }
    double acc = 0.0;
    for (int i = 0; i < span; ++i) acc += line[i];
    auto out = horiz.row(y);
    out[0] = acc;
    for (int x = 1; x < w; ++x) {
      acc += line[x + span - 1] - line[x - 1];
      out[x] = acc;
    }
  }
  Plane<double> result(w, h);
  std::vector<double> column(static_cast<std::size_t>(h + 2 * radius));
  const double norm = 1.0 / (static_cast<double>(span) * span);
  for (int x = 0; x < w; ++x) {
    for (int i = 0; i < h + 2 * radius; ++i) column[i] = horiz.clamped(x, i - radius);
    double acc = 0.0;
    for (int i = 0; i < span; ++i) acc += column[i];
    result(x, 0) = acc * norm;
    for (int y = 1; y < h; ++y) {
      acc += column[y + span - 1] - column[y - 1];
      result(x, y) = acc * norm;
    }
  }
  return result;
}

/// Self-guided filter (guide = input): per-window a = var/(var+eps),
/// b = mean*(1-a), output = mean(a)*I + mean(b), clamped to [0, 255].
template <typename T>
SmoothedFrame guided_filter(const Plane<T>& frame, int radius, double epsilon) {
  if (radius < 1) throw ConfigError("guided filter radius must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("guided filter epsilon must be > 0");
  const int window = 2 * radius + 1;
  if (frame.width() < window || frame.height() < window) {
    throw GeometryError("frame " + std::to_string(frame.width()) + "x" +
                        std::to_string(frame.height()) + " is smaller than the " +
                        std::to_string(window) + "x" + std::to_string(window) +
                        " guided filter window");
  }
  const auto input = transform<double>(frame, [](T v) { return static_cast<double>(v); });
  const auto squared = transform<double>(input, [](double v) { return v * v; });
  const auto mean = box_mean(input, radius);
  const auto mean_sq = box_mean(squared, radius);

  Plane<double> a(frame.width(), frame.height());
  Plane<double> b(frame.width(), frame.height());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double m = mean.pixels()[i];
    const double var = std::max(0.0, mean_sq.pixels()[i] - m * m);
    const double ai = var / (var + epsilon);
    a.pixels()[i] = ai;
    b.pixels()[i] = m * (1.0 - ai);
  }
  const auto mean_a = box_mean(a, radius);
  const auto mean_b = box_mean(b, radius);

  SmoothedFrame out(frame.width(), frame.height());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double v = mean_a.pixels()[i] * input.pixels()[i] + mean_b.pixels()[i];
    out.pixels()[i] = std::clamp(v, 0.0, 255.0);
  }
  return out;
}

/// 3x3 Sobel gradient with replicate padding.
///
/// `scale` multiplies both kernel responses; 1.0 is the raw integer kernel,
/// 1/8 turns the response into a slope in intensity levels per pixel.
template <typename T>
GradientField sobel_gradient(const Plane<T>& frame, double scale = 1.0) {
  if (frame.width() < 3 || frame.height() < 3) {
    throw GeometryError("Sobel operator needs at least a 3x3 frame");
  }
  const int w = frame.width();
  const int h = frame.height();
  GradientField g{Plane<double>(w, h), Plane<double>(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto p = [&](int dx, int dy) { return static_cast<double>(frame.clamped(x + dx, y + dy)); };
      const double gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
      const double sx = gx * scale;
      const double sy = gy * scale;
      g.magnitude(x, y) = std::sqrt(sx * sx + sy * sy);
      double angle = std::atan2(sy, sx);
      if (angle <= -std::numbers::pi) angle = std::numbers::pi;
      g.orientation(x, y) = angle;
    }
  }
  return g;
}

}  // namespace banding
