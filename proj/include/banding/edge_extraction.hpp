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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "banding/error.hpp"
#include "banding/image.hpp"
#include "banding/preprocess.hpp"

namespace banding {

enum class PixelClass : std::uint8_t { kFlat = 0, kCandidate = 1, kTexture = 2 };

using PixelClassMap = Plane<PixelClass>;

struct BandingEdge {
  int label = 0;
  std::vector<Point> points;  // unique pixels in walk order
  bool closed = false;        // loop rather than an open curve

  std::size_t length() const noexcept { return points.size(); }
};

struct BandingEdgeMap {
  Plane<std::int32_t> labels;  // 0 = background, otherwise edge label
  std::vector<BandingEdge> edges;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
  const BandingEdge& edge(std::int32_t label) const { return edges.at(static_cast<std::size_t>(label - 1)); }
};

struct EdgeParams {
  double t1 = 2.0;
  double t2 = 12.0;
  int blob_radius = 2;
  int min_length = 16;
};

namespace detail {

// 4-neighbours first so that walks follow straight runs before diagonals.
inline constexpr std::array<Point, 8> kNeighbours8{{
    {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

// 8-connected components over pixels where `member` holds, labelled 1..n in
// raster order of their first pixel.
template <typename Pred>
int label_components(int w, int h, Pred&& member, Plane<std::int32_t>& labels) {
  labels = Plane<std::int32_t>(w, h, 0);
  int next = 0;
  std::vector<Point> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!member(x, y) || labels(x, y) != 0) continue;
      labels(x, y) = ++next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (const Point d : kNeighbours8) {
          const int nx = p.x + d.x;
          const int ny = p.y + d.y;
          if (labels.contains(nx, ny) && labels(nx, ny) == 0 && member(nx, ny)) {
            labels(nx, ny) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return next;
}

// Integer Bresenham segment from a to b inclusive.
inline std::vector<Point> bresenham(Point a, Point b) {
  std::vector<Point> out;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Point p = a;
  for (;;) {
    out.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return out;
}

inline bool adjacent8(Point a, Point b) {
  return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1 && !(a == b);
}

}  // namespace detail

/// Three-way split: Flat below t1, Texture above t2, candidate in [t1, t2].
inline PixelClassMap classify_pixels(const GradientField& grad, double t1, double t2) {
  if (!(t1 >= 0.0) || !(t1 < t2)) {
    throw ConfigError("classification thresholds need 0 <= t1 < t2");
  }
  return transform<PixelClass>(grad.magnitude, [=](double m) {
    if (m < t1) return PixelClass::kFlat;
    if (m > t2) return PixelClass::kTexture;
    return PixelClass::kCandidate;
  });
}

// Step 1: a candidate touching Texture anywhere in its 8-neighbourhood is
// demoted to Flat.
inline PixelClassMap uniformity_check(const PixelClassMap& classes) {
  PixelClassMap out = classes;
  for (int y = 0; y < classes.height(); ++y) {
    for (int x = 0; x < classes.width(); ++x) {
      if (classes(x, y) != PixelClass::kCandidate) continue;
      for (const Point d : detail::kNeighbours8) {
        const int nx = x + d.x;
        const int ny = y + d.y;
        if (classes.contains(nx, ny) && classes(nx, ny) == PixelClass::kTexture) {
          out(x, y) = PixelClass::kFlat;
          break;
        }
      }
    }
  }
  return out;
}

// Step 2: Canny-style non-maxima suppression along the gradient direction
// quantised to 0/45/90/135 degrees. Ties survive; magnitudes within a
// relative 1e-9 count as ties so that symmetric step profiles are not split
// by rounding in the filters.
inline PixelClassMap thin_edges(const PixelClassMap& classes, const GradientField& grad) {
  require_same_geometry(classes, grad.magnitude, "thin_edges");
  static constexpr std::array<Point, 4> kStep{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
  PixelClassMap out = classes;
  const auto& mag = grad.magnitude;
  for (int y = 0; y < classes.height(); ++y) {
    for (int x = 0; x < classes.width(); ++x) {
      if (classes(x, y) != PixelClass::kCandidate) continue;
      double angle = std::fmod(grad.orientation(x, y), std::numbers::pi);
      if (angle < 0.0) angle += std::numbers::pi;
      const int sector = static_cast<int>(std::lround(angle / (std::numbers::pi / 4.0))) % 4;
      const Point d = kStep[static_cast<std::size_t>(sector)];
      const double m = mag(x, y);
      auto below = [m](double other) { return m < other - 1e-9 * std::max(1.0, other); };
      if (below(mag.clamped(x + d.x, y + d.y)) || below(mag.clamped(x - d.x, y - d.y))) {
        out(x, y) = PixelClass::kFlat;
      }
    }
  }
  return out;
}

// Step 3: candidates from different components lying within a circular blob
// (distance <= 2*radius) are bridged by a straight segment, unless the
// segment crosses Texture.
inline PixelClassMap fill_gaps(const PixelClassMap& classes, int blob_radius) {
  if (blob_radius < 0) throw ConfigError("blob radius must be >= 0");
  PixelClassMap out = classes;
  if (blob_radius == 0) return out;
  Plane<std::int32_t> labels;
  detail::label_components(classes.width(), classes.height(),
                           [&](int x, int y) { return classes(x, y) == PixelClass::kCandidate; },
                           labels);
  const int reach = 2 * blob_radius;
  for (int y = 0; y < classes.height(); ++y) {
    for (int x = 0; x < classes.width(); ++x) {
      if (classes(x, y) != PixelClass::kCandidate) continue;
      const std::int32_t own = labels(x, y);
      for (int dy = 0; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
          if (dy == 0 && dx <= 0) continue;  // each unordered pair once
          if (dx * dx + dy * dy > reach * reach) continue;
          const int qx = x + dx;
          const int qy = y + dy;
          if (!classes.contains(qx, qy) || classes(qx, qy) != PixelClass::kCandidate) continue;
          if (labels(qx, qy) == own) continue;
          const auto segment = detail::bresenham({x, y}, {qx, qy});
          const bool blocked = std::any_of(segment.begin(), segment.end(), [&](Point p) {
            return classes(p.x, p.y) == PixelClass::kTexture;
          });
          if (blocked) continue;
          for (const Point p : segment) out(p.x, p.y) = PixelClass::kCandidate;
        }
      }
    }
  }
  return out;
}

/// Steps 4-6: link 8-connected candidates into chains, drop chains shorter
/// than `min_length` pixels, and label the survivors 1..K.
inline BandingEdgeMap link_and_label(const PixelClassMap& classes, int min_length) {
  const int w = classes.width();
  const int h = classes.height();
  auto member = [&](int x, int y) { return classes(x, y) == PixelClass::kCandidate; };
  Plane<std::int32_t> components;
  const int n = detail::label_components(w, h, member, components);

  std::vector<std::vector<Point>> pixels(static_cast<std::size_t>(n));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (const auto c = components(x, y); c > 0) pixels[static_cast<std::size_t>(c - 1)].push_back({x, y});
    }
  }

  auto degree = [&](Point p, std::int32_t c) {
    int d = 0;
    for (const Point o : detail::kNeighbours8) {
      const int nx = p.x + o.x;
      const int ny = p.y + o.y;
      if (components.contains(nx, ny) && components(nx, ny) == c) ++d;
    }
    return d;
  };

  BandingEdgeMap bem{Plane<std::int32_t>(w, h, 0), {}};
  Plane<std::uint8_t> visited(w, h, 0);
  for (int c = 1; c <= n; ++c) {
    const auto& members = pixels[static_cast<std::size_t>(c - 1)];
    if (static_cast<int>(members.size()) < min_length) continue;

    // Start from the first endpoint in raster order; loops start anywhere.
    Point start = members.front();
    bool has_endpoint = false;
    for (const Point p : members) {
      if (degree(p, c) <= 1) {
        start = p;
        has_endpoint = true;
        break;
      }
    }

    BandingEdge edge;
    edge.label = static_cast<int>(bem.edges.size()) + 1;
    edge.points.reserve(members.size());
    std::vector<Point> stack{start};
    visited(start.x, start.y) = 1;
    edge.points.push_back(start);
    while (!stack.empty()) {
      const Point p = stack.back();
      bool advanced = false;
      for (const Point o : detail::kNeighbours8) {
        const int nx = p.x + o.x;
        const int ny = p.y + o.y;
        if (components.contains(nx, ny) && components(nx, ny) == c && !visited(nx, ny)) {
          visited(nx, ny) = 1;
          edge.points.push_back({nx, ny});
          stack.push_back({nx, ny});
          advanced = true;
          break;
        }
      }
      if (!advanced) stack.pop_back();
    }
    edge.closed = !has_endpoint && edge.points.size() >= 4 &&
                  detail::adjacent8(edge.points.front(), edge.points.back());
    for (const Point p : edge.points) bem.labels(p.x, p.y) = edge.label;
    bem.edges.push_back(std::move(edge));
  }
  return bem;
}

/// Runs classification followed by all six extraction steps.
inline BandingEdgeMap extract_banding_edges(const GradientField& grad, const EdgeParams& params) {
  auto classes = classify_pixels(grad, params.t1, params.t2);
  classes = uniformity_check(classes);
  classes = thin_edges(classes, grad);
  classes = fill_gaps(classes, params.blob_radius);
  return link_and_label(classes, params.min_length);
}

}  // namespace banding
