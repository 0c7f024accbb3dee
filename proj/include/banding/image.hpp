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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banding/error.hpp"

namespace banding {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Row-major single-channel image plane.
///
/// Out-of-range reads through `clamped()` replicate the nearest border
/// sample; every filter in the library pads this way.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw GeometryError("plane dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Plane(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1 ||
        data_.size() != static_cast<std::size_t>(width) * height) {
      throw GeometryError("plane data does not match " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  const T& clamped(int x, int y) const noexcept {
    return data_[index(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1))];
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }
  std::span<const T> row(int y) const noexcept {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<T> row(int y) noexcept {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  template <typename U>
  bool same_geometry(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

template <typename A, typename B>
void require_same_geometry(const Plane<A>& a, const Plane<B>& b, const char* what) {
  if (!a.same_geometry(b)) {
    throw GeometryError(std::string(what) + ": geometry mismatch (" +
                        std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                        " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()) + ")");
  }
}

template <typename U, typename T, typename F>
Plane<U> transform(const Plane<T>& in, F&& fn) {
  Plane<U> out(in.width(), in.height());
  auto src = in.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = fn(src[i]);
  return out;
}

/// 8-bit intensity plane plus its position in the source stream.
struct LumaFrame {
  Plane<std::uint8_t> plane;
  std::int64_t frame_index = 0;

  int width() const noexcept { return plane.width(); }
  int height() const noexcept { return plane.height(); }
  friend bool operator==(const LumaFrame&, const LumaFrame&) = default;
};

struct VideoStream {
  std::vector<LumaFrame> frames;
  double frame_rate = 0.0;  // informational only

  std::size_t frame_count() const noexcept { return frames.size(); }
  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }

  // Throws unless the stream is non-empty and geometrically uniform.
  void validate() const {
    if (frames.empty()) throw ParseError("video stream contains no frames");
    for (const auto& f : frames) {
      if (!f.plane.same_geometry(frames.front().plane)) {
        throw GeometryError("frame " + std::to_string(f.frame_index) +
                            " differs in size from frame 0");
      }
    }
  }
};

}  // namespace banding
