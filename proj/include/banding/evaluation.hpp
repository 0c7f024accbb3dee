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
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banding/error.hpp"
#include "banding/image.hpp"

namespace banding {

struct ScoredItem {
  std::string item_id;
  double predicted = 0.0;
  double mos = 0.0;
};

/// mos ~ b2 + (b1 - b2) / (1 + exp(-(x - b3) / |b4|))
struct LogisticParams {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 1.0;

  double operator()(double x) const noexcept {
    const double u = std::clamp((x - b3) / std::abs(b4), -700.0, 700.0);
    return b2 + (b1 - b2) / (1.0 + std::exp(-u));
  }
};

struct EvalReport {
  double srcc = 0.0;
  double krcc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  LogisticParams logistic;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double sum_squared_residuals(const LogisticParams& p, std::span<const double> x,
                                    std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = p(x[i]) - y[i];
    acc += r * r;
  }
  return acc;
}

// Levenberg-Marquardt on the four logistic parameters.
inline LogisticParams levenberg_marquardt(LogisticParams p, std::span<const double> x,
                                          std::span<const double> y) {
  const std::size_t n = x.size();
  double cost = sum_squared_residuals(p, x, y);
  double damping = 1e-3;
  for (int iter = 0; iter < 1000 && cost > 0.0; ++iter) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    const double s = std::abs(p.b4);
    const double sign = p.b4 < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::clamp((x[i] - p.b3) / s, -700.0, 700.0);
      const double g = 1.0 / (1.0 + std::exp(-u));
      const double dg = g * (1.0 - g);
      Eigen::Vector4d j;
      j << g, 1.0 - g, (p.b1 - p.b2) * dg * (-1.0 / s), (p.b1 - p.b2) * dg * (-u / s) * sign;
      const double r = p(x[i]) - y[i];
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool improved = false;
    while (damping < 1e16) {
      Eigen::Matrix4d a = jtj;
      for (int d = 0; d < 4; ++d) a(d, d) += damping * std::max(jtj(d, d), 1e-12);
      const Eigen::Vector4d step = a.ldlt().solve(-jtr);
      LogisticParams trial{p.b1 + step[0], p.b2 + step[1], p.b3 + step[2], p.b4 + step[3]};
      if (trial.b4 == 0.0) trial.b4 = 1e-12;
      const double trial_cost = sum_squared_residuals(trial, x, y);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double gain = cost - trial_cost;
        p = trial;
        cost = trial_cost;
        damping = std::max(damping / 10.0, 1e-15);
        improved = true;
        if (gain <= 1e-15 * (1.0 + cost)) return p;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  return p;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Fractional (tie-averaged) ranks starting at 1.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Pairs tied within runs of equal values of a sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal_to_next) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal_to_next(i - 1)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Strict inversions (i < j, v[i] > v[j]) via merge sort.
inline std::int64_t count_inversions(std::vector<double>& v) {
  std::vector<double> buffer(v.size());
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buffer[k++] = v[j++];
        } else {
          buffer[k++] = v[i++];
        }
      }
      while (i < mid) buffer[k++] = v[i++];
      while (j < hi) buffer[k++] = v[j++];
    }
    v.swap(buffer);
  }
  return inversions;
}

}  // namespace detail

/// Kendall tau-b in O(n log n) (Knight's algorithm).
inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  const std::int64_t x_ties = detail::tied_pairs(n, [&](std::size_t i) { return xs[i] == xs[i + 1]; });
  const std::int64_t joint_ties =
      detail::tied_pairs(n, [&](std::size_t i) { return xs[i] == xs[i + 1] && ys[i] == ys[i + 1]; });
  std::vector<double> merged = ys;
  const std::int64_t discordant = detail::count_inversions(merged);
  const std::int64_t y_ties = detail::tied_pairs(n, [&](std::size_t i) { return merged[i] == merged[i + 1]; });
  const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(total - x_ties)) *
                       std::sqrt(static_cast<double>(total - y_ties));
  if (denom == 0.0) return 0.0;
  const auto s = total - x_ties - y_ties + joint_ties - 2 * discordant;
  return std::clamp(static_cast<double>(s) / denom, -1.0, 1.0);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = detail::average_ranks(x);
  const auto ry = detail::average_ranks(y);
  return detail::pearson(rx, ry);
}

/// Least-squares 4-parameter logistic from predicted scores to MOS.
///
/// Starts from b1 = max MOS, b2 = min MOS, b3 = median prediction, b4 = 1,
/// with b3/b4 expressed in standardised prediction units so the start does
/// not depend on the score scale. The flat fit (b1 = b2 = mean MOS) is
/// returned instead if it has lower error.
inline LogisticParams fit_logistic(std::span<const ScoredItem> items) {
  if (items.size() < 5) throw Error("logistic fit needs at least 5 items");
  std::vector<double> x, y;
  for (const auto& it : items) {
    if (!std::isfinite(it.predicted) || !std::isfinite(it.mos)) {
      throw Error("non-finite score for item '" + it.item_id + "'");
    }
    x.push_back(it.predicted);
    y.push_back(it.mos);
  }
  const double center = detail::median(x);
  double spread = 0.0;
  for (double v : x) spread += (v - center) * (v - center);
  spread = std::sqrt(spread / static_cast<double>(x.size()));
  if (!(spread > 0.0) || std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
    throw Error("degenerate input: all predicted scores are equal");
  }
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - center) / spread;

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  LogisticParams fitted = detail::levenberg_marquardt({*hi, *lo, 0.0, 1.0}, z, y);
  LogisticParams result{fitted.b1, fitted.b2, center + spread * fitted.b3, spread * std::abs(fitted.b4)};

  const double mean_mos = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  const LogisticParams flat{mean_mos, mean_mos, center, spread};
  if (detail::sum_squared_residuals(flat, x, y) < detail::sum_squared_residuals(result, x, y)) {
    return flat;
  }
  return result;
}

/// SRCC and KRCC on raw predictions; PLCC and RMSE after the logistic map.
inline EvalReport correlations(std::span<const ScoredItem> items, const LogisticParams& params) {
  if (items.size() < 2) throw Error("correlations need at least 2 items");
  std::vector<double> x, y, mapped;
  for (const auto& it : items) {
    x.push_back(it.predicted);
    y.push_back(it.mos);
    mapped.push_back(params(it.predicted));
  }
  EvalReport r;
  r.logistic = params;
  r.srcc = spearman(x, y);
  r.krcc = kendall_tau_b(x, y);
  r.plcc = detail::pearson(mapped, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += (mapped[i] - y[i]) * (mapped[i] - y[i]);
  r.rmse = std::sqrt(acc / static_cast<double>(y.size()));
  return r;
}

inline EvalReport evaluate(std::span<const ScoredItem> items) {
  return correlations(items, fit_logistic(items));
}

// ---------------------------------------------------------------------------
// Score tables

inline std::vector<ScoredItem> read_scored_items(std::istream& in) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  auto split = [&](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw ParseError("score table is empty");
  const auto header = split(line);
  if (header != std::vector<std::string>{"item_id", "predicted", "mos"}) {
    throw ParseError("score table header must be 'item_id,predicted,mos'");
  }
  std::vector<ScoredItem> items;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 columns");
    }
    ScoredItem it{cells[0], 0.0, 0.0};
    try {
      std::size_t used = 0;
      it.predicted = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("trailing");
      it.mos = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": non-numeric score");
    }
    if (!std::isfinite(it.predicted) || !std::isfinite(it.mos)) {
      throw ParseError("line " + std::to_string(line_no) + ": non-finite score");
    }
    items.push_back(std::move(it));
  }
  return items;
}

inline void write_scored_items(std::ostream& out, std::span<const ScoredItem> items) {
  out << "item_id,predicted,mos\n";
  out.precision(17);
  for (const auto& it : items) out << it.item_id << ',' << it.predicted << ',' << it.mos << '\n';
}

// ---------------------------------------------------------------------------
// Synthetic banding fixtures

enum class RampDirection { kHorizontal, kVertical, kDiagonal };

struct SyntheticBandingSpec {
  int width = 256;
  int height = 128;
  RampDirection direction = RampDirection::kHorizontal;
  int low = 0;    // ramp start level
  int high = 255; // ramp end level
  int step = 16;  // quantisation step q
  int dither = 0; // uniform integer noise amplitude added before quantising
  std::uint32_t seed = 0;
  int frames = 1;

  void validate() const {
    if (width < 1 || height < 1) throw ConfigError("fixture dimensions must be positive");
    if (step < 1) throw ConfigError("quantisation step q must be >= 1");
    if (low < 0 || high > 255 || low >= high) throw ConfigError("fixture range must satisfy 0 <= low < high <= 255");
    if (dither < 0) throw ConfigError("dither amplitude must be >= 0");
    if (frames < 1) throw ConfigError("fixture needs at least one frame");
  }
};

/// Linear ramp quantised to multiples of `step` above `low`, giving
/// ceil((high - low) / step) bands. Dither perturbs the ramp before
/// quantisation, which roughens band boundaries without adding levels.
inline VideoStream generate_banding_fixture(const SyntheticBandingSpec& spec) {
  spec.validate();
  std::mt19937 rng(spec.seed);
  std::uniform_int_distribution<int> noise(-spec.dither, spec.dither);
  const double range = spec.high - spec.low;
  auto position = [&](int x, int y) -> double {
    switch (spec.direction) {
      case RampDirection::kHorizontal: return spec.width > 1 ? range * x / (spec.width - 1) : 0.0;
      case RampDirection::kVertical: return spec.height > 1 ? range * y / (spec.height - 1) : 0.0;
      case RampDirection::kDiagonal: {
        const int span = spec.width + spec.height - 2;
        return span > 0 ? range * (x + y) / span : 0.0;
      }
    }
    return 0.0;
  };
  VideoStream stream;
  stream.frame_rate = 25.0;
  for (int f = 0; f < spec.frames; ++f) {
    Plane<std::uint8_t> plane(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        double ramp = position(x, y);
        if (spec.dither > 0) ramp = std::clamp(ramp + noise(rng), 0.0, range);
        const double level = spec.low + spec.step * std::floor(ramp / spec.step + 1e-9);
        plane(x, y) = static_cast<std::uint8_t>(std::min(level, 255.0));
      }
    }
    stream.frames.push_back({std::move(plane), f});
  }
  return stream;
}

}  // namespace banding
