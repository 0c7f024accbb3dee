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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "banding/visibility.hpp"
#include "oracle.hpp"

namespace {

using banding::MaskingParams;
using banding::PixelClass;
using banding::Plane;

// Random frame plus a handful of straight candidate runs linked into an
// edge map; the runs overlap freely so components vary in shape and length.
struct Planted {
  Plane<std::uint8_t> frame;
  banding::BandingEdgeMap bem;
  Plane<double> magnitude;
};

Planted plant(unsigned seed, int w = 32, int h = 32) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> level(0, 255);
  std::uniform_int_distribution<int> coord(0, std::min(w, h) - 1);
  std::uniform_real_distribution<double> mag(2.0, 12.0);
  Planted p{Plane<std::uint8_t>(w, h), {}, Plane<double>(w, h)};
  const int base = level(rng);
  std::uniform_int_distribution<int> jitter(-20, 20);
  for (auto& v : p.frame.pixels()) v = static_cast<std::uint8_t>(std::clamp(base + jitter(rng), 0, 255));
  for (auto& v : p.magnitude.pixels()) v = mag(rng);
  banding::PixelClassMap classes(w, h, PixelClass::kFlat);
  for (int run = 0; run < 4; ++run) {
    const int fixed = coord(rng);
    const int start = coord(rng) / 2;
    const int len = 8 + coord(rng) / 2;
    for (int i = start; i < std::min(start + len, w); ++i) {
      if (run % 2 == 0) classes(i, fixed) = PixelClass::kCandidate;
      else classes(fixed, i) = PixelClass::kCandidate;
    }
  }
  p.bem = banding::link_and_label(classes, 1);
  return p;
}

TEST(GaussianWindow, NormalisedSymmetricPeaked) {
  const auto w = banding::gaussian_window({});
  ASSERT_EQ(w.size(), 81u);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(w[40], *std::max_element(w.begin(), w.end()));
  EXPECT_DOUBLE_EQ(w[0], w[80]);
  EXPECT_DOUBLE_EQ(w[8], w[72]);
  EXPECT_NEAR(w[41] / w[40], std::exp(-1.0 / (2 * 1.5 * 1.5)), 1e-12);
}

TEST(MaskingWeights, LuminanceExamples) {
  const MaskingParams p;
  EXPECT_DOUBLE_EQ(banding::luminance_weight(0.0, p), 1.0);
  EXPECT_DOUBLE_EQ(banding::luminance_weight(81.0, p), 1.0);
  EXPECT_NEAR(banding::luminance_weight(131.0, p), 0.96, 1e-12);
  EXPECT_NEAR(banding::luminance_weight(255.0, p), 1.0 - 1.6e-5 * 174.0 * 174.0, 1e-12);
  MaskingParams steep = p;
  steep.alpha = 1e-3;
  EXPECT_DOUBLE_EQ(banding::luminance_weight(255.0, steep), 0.0);
}

TEST(MaskingWeights, TextureExamples) {
  const MaskingParams p;
  EXPECT_DOUBLE_EQ(banding::texture_weight(0.0, p), 1.0);
  EXPECT_DOUBLE_EQ(banding::texture_weight(0.32, p), 1.0);
  EXPECT_NEAR(banding::texture_weight(1.32, p), 1.0 / 32.0, 1e-12);
  EXPECT_LT(banding::texture_weight(10.0, p), banding::texture_weight(2.0, p));
}

TEST(MaskingWeights, CardinalityExamples) {
  const MaskingParams p;
  EXPECT_DOUBLE_EQ(banding::cardinality_weight(16.0, 1280, 720, p), 0.0);
  EXPECT_NEAR(banding::cardinality_weight(100.0, 1280, 720, p), 0.3227486121839514, 1e-12);
  EXPECT_NEAR(banding::cardinality_weight(17.0, 16, 16, p), std::sqrt(17.0 / 16.0), 1e-12);
}

TEST(MaskingParams, ValidationRejectsOutOfRange) {
  MaskingParams p;
  p.alpha = 0;
  EXPECT_THROW(p.validate(), banding::ConfigError);
  p = {};
  p.mu0 = 300;
  EXPECT_THROW(p.validate(), banding::ConfigError);
  p = {};
  p.c0 = 0.5;
  EXPECT_THROW(p.validate(), banding::ConfigError);
}

TEST(LocalStats, ConstantFrameHasZeroDeviation) {
  Plane<std::uint8_t> frame(20, 20, 90);
  banding::PixelClassMap classes(20, 20, PixelClass::kFlat);
  for (int x = 0; x < 20; ++x) classes(x, 10) = PixelClass::kCandidate;
  const auto bem = banding::link_and_label(classes, 1);
  const auto s = banding::local_stats(frame, bem);
  for (double v : s.mu.pixels()) EXPECT_NEAR(v, 90.0, 1e-9);
  for (double v : s.sigma.pixels()) EXPECT_NEAR(v, 0.0, 1e-9);
  for (double v : s.lambda.pixels()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(LocalStats, LambdaOnlyOnEdgePixels) {
  const auto p = plant(11);
  const auto s = banding::local_stats(p.frame, p.bem);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      if (p.bem.labels(x, y) == 0) EXPECT_EQ(s.lambda(x, y), 0.0);
      else EXPECT_GT(s.lambda(x, y), 0.0);
    }
}

TEST(LocalStats, RejectsFramesSmallerThanWindow) {
  Plane<std::uint8_t> frame(8, 20, 0);
  banding::BandingEdgeMap bem{Plane<std::int32_t>(8, 20, 0), {}};
  EXPECT_THROW(banding::local_stats(frame, bem), banding::GeometryError);
}

TEST(Bvm, MatchesScalarOracleOnPlantedEdges) {
  for (unsigned seed = 0; seed < 25; ++seed) {
    const auto p = plant(seed);
    const MaskingParams params;
    banding::GradientField grad{p.magnitude, Plane<double>(32, 32, 0.0)};
    const auto bvm = banding::build_bvm(p.frame, p.bem, grad, params);
    const auto want = oracle::visibility(p.frame, p.bem.labels, p.magnitude);
    for (std::size_t i = 0; i < want.size(); ++i) {
      ASSERT_NEAR(bvm.values.pixels()[i], want.pixels()[i], 1e-9) << "seed " << seed;
    }
  }
}

TEST(Bvm, ZeroOffEdgesAndForShortEdges) {
  Plane<std::uint8_t> frame(40, 40, 60);
  banding::PixelClassMap classes(40, 40, PixelClass::kFlat);
  for (int x = 0; x < 10; ++x) classes(x, 5) = PixelClass::kCandidate;   // 10 px: too short
  for (int x = 0; x < 30; ++x) classes(x, 20) = PixelClass::kCandidate;  // 30 px
  const auto bem = banding::link_and_label(classes, 1);
  Plane<double> mag(40, 40, 3.0);
  const auto bvm = banding::build_bvm(frame, bem, {mag, Plane<double>(40, 40, 0.0)}, {});
  EXPECT_EQ(bvm.values(3, 5), 0.0);
  EXPECT_EQ(bvm.values(3, 30), 0.0);
  EXPECT_NEAR(bvm.values(3, 20), std::sqrt(30.0 / 40.0) * 3.0, 1e-12);
  EXPECT_EQ(bvm.nonzero().size(), 30u);
}

TEST(Bvm, RejectsMismatchedGeometry) {
  const auto p = plant(1);
  Plane<double> mag(31, 32, 1.0);
  const auto s = banding::local_stats(p.frame, p.bem);
  EXPECT_THROW(banding::build_bvm(p.bem, s, mag, {}), banding::GeometryError);
}

}  // namespace
