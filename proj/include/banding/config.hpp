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

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "banding/edge_extraction.hpp"
#include "banding/error.hpp"
#include "banding/scoring.hpp"
#include "banding/visibility.hpp"

namespace banding {

// Which gradient magnitude scales the visibility product.
enum class GradientSource { kSmoothed, kOriginal };

/// Every tunable of the detector. Field names double as config-file keys.
struct AnalysisConfig {
  int guided_radius = 4;
  double guided_eps = 100.0;
  double sobel_scale = 0.125;
  EdgeParams edges;
  StatsWindow window;
  MaskingParams masking;
  GradientSource gradient_source = GradientSource::kSmoothed;
  PoolingParams pooling;

  void validate() const {
    if (guided_radius < 1) throw ConfigError("guided_radius must be >= 1");
    if (!(guided_eps > 0.0)) throw ConfigError("guided_eps must be > 0");
    if (!(sobel_scale > 0.0)) throw ConfigError("sobel_scale must be > 0");
    if (!(edges.t1 >= 0.0 && edges.t1 < edges.t2)) throw ConfigError("need 0 <= t1 < t2");
    if (edges.blob_radius < 0) throw ConfigError("blob_radius must be >= 0");
    if (edges.min_length < 1) throw ConfigError("min_edge_length must be >= 1");
    if (window.half_rows < 0 || window.half_cols < 0) throw ConfigError("window half-sizes must be >= 0");
    if (!(window.gaussian_sigma > 0.0)) throw ConfigError("gaussian_sigma must be > 0");
    masking.validate();
    pooling.validate();
  }

  using Value = std::variant<double, int, std::string>;

  struct Field {
    std::string_view name;
    std::function<Value(const AnalysisConfig&)> get;
    std::function<void(AnalysisConfig&, std::string_view)> set;
  };

  static const std::vector<Field>& fields();

  void set(std::string_view key, std::string_view value) {
    for (const auto& f : fields()) {
      if (f.name == key) {
        f.set(*this, value);
        return;
      }
    }
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }

  std::vector<std::pair<std::string, Value>> entries() const {
    std::vector<std::pair<std::string, Value>> out;
    for (const auto& f : fields()) out.emplace_back(std::string(f.name), f.get(*this));
    return out;
  }
};

namespace detail {

inline double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("value '" + std::string(text) + "' for '" + std::string(key) + "' is not a finite number");
  }
  return v;
}

inline int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("value '" + std::string(text) + "' for '" + std::string(key) + "' is not an integer");
  }
  return v;
}

template <typename Member>
AnalysisConfig::Field real_field(std::string_view name, Member member) {
  return {name, [=](const AnalysisConfig& c) { return AnalysisConfig::Value(std::invoke(member, c)); },
          [=](AnalysisConfig& c, std::string_view v) { std::invoke(member, c) = parse_real(name, v); }};
}

template <typename Member>
AnalysisConfig::Field int_field(std::string_view name, Member member) {
  return {name, [=](const AnalysisConfig& c) { return AnalysisConfig::Value(std::invoke(member, c)); },
          [=](AnalysisConfig& c, std::string_view v) { std::invoke(member, c) = parse_int(name, v); }};
}

}  // namespace detail

inline const std::vector<AnalysisConfig::Field>& AnalysisConfig::fields() {
  using C = AnalysisConfig;
  using detail::int_field;
  using detail::real_field;
  static const std::vector<Field> table = {
      int_field("guided_radius", [](auto& c) -> auto& { return c.guided_radius; }),
      real_field("guided_eps", [](auto& c) -> auto& { return c.guided_eps; }),
      real_field("sobel_scale", [](auto& c) -> auto& { return c.sobel_scale; }),
      real_field("t1", [](auto& c) -> auto& { return c.edges.t1; }),
      real_field("t2", [](auto& c) -> auto& { return c.edges.t2; }),
      int_field("blob_radius", [](auto& c) -> auto& { return c.edges.blob_radius; }),
      int_field("min_edge_length", [](auto& c) -> auto& { return c.edges.min_length; }),
      int_field("window_half_rows", [](auto& c) -> auto& { return c.window.half_rows; }),
      int_field("window_half_cols", [](auto& c) -> auto& { return c.window.half_cols; }),
      real_field("gaussian_sigma", [](auto& c) -> auto& { return c.window.gaussian_sigma; }),
      real_field("alpha", [](auto& c) -> auto& { return c.masking.alpha; }),
      real_field("beta", [](auto& c) -> auto& { return c.masking.beta; }),
      real_field("mu0", [](auto& c) -> auto& { return c.masking.mu0; }),
      real_field("gamma", [](auto& c) -> auto& { return c.masking.gamma; }),
      real_field("lambda0", [](auto& c) -> auto& { return c.masking.lambda0; }),
      real_field("c0", [](auto& c) -> auto& { return c.masking.c0; }),
      real_field("eta", [](auto& c) -> auto& { return c.masking.eta; }),
      Field{"gradient_source",
            [](const C& c) {
              return Value(std::string(c.gradient_source == GradientSource::kSmoothed ? "smoothed" : "original"));
            },
            [](C& c, std::string_view v) {
              if (v == "smoothed") {
                c.gradient_source = GradientSource::kSmoothed;
              } else if (v == "original") {
                c.gradient_source = GradientSource::kOriginal;
              } else {
                throw ConfigError("gradient_source must be 'smoothed' or 'original'");
              }
            }},
      real_field("p", [](auto& c) -> auto& { return c.pooling.p; }),
      real_field("a_si", [](auto& c) -> auto& { return c.pooling.a_si; }),
      real_field("b_si", [](auto& c) -> auto& { return c.pooling.b_si; }),
      real_field("a_ti", [](auto& c) -> auto& { return c.pooling.a_ti; }),
      real_field("b_ti", [](auto& c) -> auto& { return c.pooling.b_ti; }),
  };
  return table;
}

/// Applies `key = value` lines. Blank lines and '#' comments are ignored.
inline void apply_config_text(AnalysisConfig& config, std::istream& in) {
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

// "key=value" as given on the command line.
inline void apply_override(AnalysisConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  config.set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace banding
