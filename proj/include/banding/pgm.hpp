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
#include <filesystem>
#include <fstream>

#include "banding/edge_extraction.hpp"
#include "banding/error.hpp"
#include "banding/image.hpp"
#include "banding/visibility.hpp"

namespace banding {

inline void write_pgm(const std::filesystem::path& path, const Plane<std::uint8_t>& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Gray level = round(value * scale), saturated at 255.
inline Plane<std::uint8_t> bvm_heatmap(const BandingVisibilityMap& bvm, double scale) {
  return transform<std::uint8_t>(bvm.values, [scale](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v * scale), 0L, 255L));
  });
}

// One gray level per label, cycling through 1..255; background stays 0.
inline Plane<std::uint8_t> bem_label_image(const BandingEdgeMap& bem) {
  return transform<std::uint8_t>(bem.labels, [](std::int32_t label) {
    return static_cast<std::uint8_t>(label == 0 ? 0 : (label - 1) % 255 + 1);
  });
}

}  // namespace banding
