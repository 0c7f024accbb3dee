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
#include <string>
#include <vector>

#include "banding/edge_extraction.hpp"
#include "banding/error.hpp"
#include "banding/image.hpp"
#include "banding/preprocess.hpp"

namespace banding {

/// Masking transfer-function constants.
struct MaskingParams {
  // luminance masking
  double alpha = 1.6e-5;
  double beta = 2.0;
  double mu0 = 81.0;
  // texture masking
  double gamma = 5.0;
  double lambda0 = 0.32;
  // edge cardinality
  double c0 = 16.0;
  double eta = 0.5;

  void validate() const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
    if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
    if (!(mu0 >= 0.0 && mu0 <= 255.0)) throw ConfigError("mu0 must lie in [0, 255]");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    if (!(lambda0 >= 0.0)) throw ConfigError("lambda0 must be >= 0");
    if (!(c0 >= 1.0)) throw ConfigError("c0 must be >= 1");
    if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  }
};

struct StatsWindow {
  int half_rows = 4;  // K
  int half_cols = 4;  // L
  double gaussian_sigma = 1.5;

  int rows() const noexcept { return 2 * half_rows + 1; }
  int cols() const noexcept { return 2 * half_cols + 1; }
};

/// Unit-sum isotropic Gaussian, row-major over (2K+1) x (2L+1).
inline std::vector<double> gaussian_window(const StatsWindow& win) {
  if (win.half_rows < 0 || win.half_cols < 0) throw ConfigError("window half-sizes must be >= 0");
  if (!(win.gaussian_sigma > 0.0)) throw ConfigError("gaussian sigma must be > 0");
  std::vector<double> w(static_cast<std::size_t>(win.rows()) * win.cols());
  const double denom = 2.0 * win.gaussian_sigma * win.gaussian_sigma;
  double total = 0.0;
  for (int k = -win.half_rows; k <= win.half_rows; ++k) {
    for (int l = -win.half_cols; l <= win.half_cols; ++l) {
      const double v = std::exp(-(k * k + l * l) / denom);
      w[static_cast<std::size_t>(k + win.half_rows) * win.cols() + (l + win.half_cols)] = v;
      total += v;
    }
  }
  for (double& v : w) v /= total;
  return w;
}

struct LocalStats {
  StatsWindow window;
  std::vector<double> weights;
  Plane<double> mu;      // Gaussian-weighted local mean, whole frame
  Plane<double> sigma;   // Gaussian-weighted local deviation, whole frame
  Plane<double> lambda;  // mean of sigma over the window; set on edge pixels only
};

/// Local mean / deviation of the original frame and the activity measure
/// lambda (plain window mean of sigma) at every labelled edge pixel.
inline LocalStats local_stats(const Plane<std::uint8_t>& frame, const BandingEdgeMap& bem,
                              const StatsWindow& win = {}) {
  require_same_geometry(frame, bem.labels, "local_stats");
  if (frame.height() < win.rows() || frame.width() < win.cols()) {
    throw GeometryError("frame is smaller than the local statistics window");
  }
  const int w = frame.width();
  const int h = frame.height();
  const int K = win.half_rows;
  const int L = win.half_cols;
  LocalStats s{win, gaussian_window(win), Plane<double>(w, h), Plane<double>(w, h), Plane<double>(w, h, 0.0)};

  // Padded copy so the inner loops need no clamping.
  const int pw = w + 2 * L;
  std::vector<double> padded(static_cast<std::size_t>(pw) * (h + 2 * K));
  for (int y = -K; y < h + K; ++y) {
    for (int x = -L; x < w + L; ++x) {
      padded[static_cast<std::size_t>(y + K) * pw + (x + L)] = frame.clamped(x, y);
    }
  }
  const int cols = win.cols();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mean = 0.0;
      for (int k = 0; k < win.rows(); ++k) {
        const double* src = &padded[static_cast<std::size_t>(y + k) * pw + x];
        const double* wk = &s.weights[static_cast<std::size_t>(k) * cols];
        for (int l = 0; l < cols; ++l) mean += wk[l] * src[l];
      }
      double var = 0.0;
      for (int k = 0; k < win.rows(); ++k) {
        const double* src = &padded[static_cast<std::size_t>(y + k) * pw + x];
        const double* wk = &s.weights[static_cast<std::size_t>(k) * cols];
        for (int l = 0; l < cols; ++l) {
          const double d = src[l] - mean;
          var += wk[l] * d * d;
        }
      }
      s.mu(x, y) = mean;
      s.sigma(x, y) = std::sqrt(var);
    }
  }

  const double area = static_cast<double>(win.rows()) * cols;
  for (const auto& edge : bem.edges) {
    for (const Point p : edge.points) {
      double acc = 0.0;
      for (int k = -K; k <= K; ++k) {
        for (int l = -L; l <= L; ++l) acc += s.sigma.clamped(p.x - l, p.y - k);
      }
      s.lambda(p.x, p.y) = acc / area;
    }
  }
  return s;
}

// Luminance masking: unity up to mu0, then a power-law decay clamped at 0.
inline double luminance_weight(double mu, const MaskingParams& p) {
  if (mu <= p.mu0) return 1.0;
  return std::max(0.0, 1.0 - p.alpha * std::pow(mu - p.mu0, p.beta));
}

// Texture masking: unity up to lambda0, then inverse power of the activity.
inline double texture_weight(double lambda, const MaskingParams& p) {
  if (lambda <= p.lambda0) return 1.0;
  return 1.0 / std::pow(1.0 + (lambda - p.lambda0), p.gamma);
}

// Cardinality masking: zero for edges of at most c0 pixels, otherwise the
// edge length relative to the frame diagonal scale sqrt(width*height).
inline double cardinality_weight(double edge_length, int width, int height, const MaskingParams& p) {
  if (edge_length <= p.c0) return 0.0;
  const double norm = std::sqrt(static_cast<double>(width) * static_cast<double>(height));
  return std::pow(edge_length / norm, p.eta);
}

struct BandingVisibilityMap {
  Plane<double> values;

  int width() const noexcept { return values.width(); }
  int height() const noexcept { return values.height(); }
  std::vector<double> nonzero() const {
    std::vector<double> out;
    for (double v : values.pixels()) {
      if (v > 0.0) out.push_back(v);
    }
    return out;
  }
};

/// Product of luminance, texture and cardinality weights times the gradient
/// magnitude, evaluated on edge pixels; zero elsewhere.
inline BandingVisibilityMap build_bvm(const BandingEdgeMap& bem, const LocalStats& stats,
                                      const Plane<double>& gradient_magnitude, const MaskingParams& params) {
  require_same_geometry(bem.labels, gradient_magnitude, "build_bvm");
  require_same_geometry(bem.labels, stats.mu, "build_bvm");
  params.validate();
  BandingVisibilityMap bvm{Plane<double>(bem.width(), bem.height(), 0.0)};
  for (const auto& edge : bem.edges) {
    const double wc = cardinality_weight(static_cast<double>(edge.length()), bem.width(), bem.height(), params);
    for (const Point p : edge.points) {
      const double wl = luminance_weight(stats.mu(p.x, p.y), params);
      const double wt = texture_weight(stats.lambda(p.x, p.y), params);
      bvm.values(p.x, p.y) = wl * wt * wc * gradient_magnitude(p.x, p.y);
    }
  }
  return bvm;
}

inline BandingVisibilityMap build_bvm(const Plane<std::uint8_t>& frame, const BandingEdgeMap& bem,
                                      const GradientField& grad, const MaskingParams& params,
                                      const StatsWindow& win = {}) {
  require_same_geometry(frame, grad.magnitude, "build_bvm");
  return build_bvm(bem, local_stats(frame, bem, win), grad.magnitude, params);
}

}  // namespace banding
