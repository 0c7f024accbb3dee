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

#include <algorithm>
#include <random>
#include <set>

#include "banding/edge_extraction.hpp"
#include "oracle.hpp"

namespace {

using banding::PixelClass;
using banding::PixelClassMap;
using banding::Plane;
using banding::Point;

constexpr auto F = PixelClass::kFlat;
constexpr auto C = PixelClass::kCandidate;
constexpr auto T = PixelClass::kTexture;

banding::GradientField field(Plane<double> mag, double angle = 0.0) {
  Plane<double> ori(mag.width(), mag.height(), angle);
  return {std::move(mag), std::move(ori)};
}

TEST(Classify, ThresholdsAreInclusiveForCandidates) {
  Plane<double> mag(5, 1);
  mag(0, 0) = 1.999;
  mag(1, 0) = 2.0;
  mag(2, 0) = 7.0;
  mag(3, 0) = 12.0;
  mag(4, 0) = 12.001;
  const auto classes = banding::classify_pixels(field(mag), 2.0, 12.0);
  EXPECT_EQ(classes(0, 0), F);
  EXPECT_EQ(classes(1, 0), C);
  EXPECT_EQ(classes(2, 0), C);
  EXPECT_EQ(classes(3, 0), C);
  EXPECT_EQ(classes(4, 0), T);
}

TEST(Classify, RejectsInvertedThresholds) {
  Plane<double> mag(3, 3, 0.0);
  EXPECT_THROW(banding::classify_pixels(field(mag), 5.0, 5.0), banding::ConfigError);
  EXPECT_THROW(banding::classify_pixels(field(mag), -1.0, 5.0), banding::ConfigError);
}

TEST(Uniformity, CandidatesTouchingTextureAreDemoted) {
  PixelClassMap m(5, 5, F);
  m(2, 2) = T;
  m(1, 1) = C;  // diagonal neighbour of texture
  m(0, 2) = C;  // two pixels away
  m(4, 4) = C;
  const auto out = banding::uniformity_check(m);
  EXPECT_EQ(out(1, 1), F);
  EXPECT_EQ(out(0, 2), C);
  EXPECT_EQ(out(4, 4), C);
  EXPECT_EQ(out(2, 2), T);
}

TEST(Nms, MatchesScalarOracleOnRandomGradients) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> mag_dist(0.0, 14.0);
  std::uniform_real_distribution<double> ang_dist(-3.14159, 3.14159);
  for (int trial = 0; trial < 20; ++trial) {
    Plane<double> mag(16, 12), ori(16, 12);
    for (auto& v : mag.pixels()) v = std::round(mag_dist(rng) * 4) / 4;  // quarter steps give ties
    for (auto& v : ori.pixels()) v = ang_dist(rng);
    banding::GradientField g{mag, ori};
    const auto classes = banding::classify_pixels(g, 2.0, 12.0);
    const auto out = banding::thin_edges(classes, g);
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 16; ++x) {
        if (classes(x, y) != C) {
          ASSERT_EQ(out(x, y), classes(x, y));
        } else {
          ASSERT_EQ(out(x, y) == C, oracle::survives_nms(mag, ori, x, y)) << x << "," << y;
        }
      }
    }
  }
}

TEST(Nms, SymmetricPlateauKeepsBothPixels) {
  Plane<double> mag(7, 3, 0.0);
  for (int y = 0; y < 3; ++y) {
    mag(2, y) = 2.5;
    mag(3, y) = 5.0;
    mag(4, y) = 5.0;
    mag(5, y) = 2.5;
  }
  const auto g = field(mag);
  const auto out = banding::thin_edges(banding::classify_pixels(g, 2, 12), g);
  EXPECT_EQ(out(3, 1), C);
  EXPECT_EQ(out(4, 1), C);
  EXPECT_EQ(out(2, 1), F);
  EXPECT_EQ(out(5, 1), F);
}

TEST(Bresenham, EndpointsIncludedAndEightConnected) {
  const auto line = banding::detail::bresenham({0, 0}, {4, -2});
  ASSERT_EQ(line.front(), (Point{0, 0}));
  ASSERT_EQ(line.back(), (Point{4, -2}));
  EXPECT_EQ(line.size(), 5u);
  for (std::size_t i = 1; i < line.size(); ++i) {
    EXPECT_TRUE(banding::detail::adjacent8(line[i - 1], line[i]));
  }
}

PixelClassMap two_segments(int gap) {
  PixelClassMap m(30, 5, F);
  for (int x = 0; x < 10; ++x) m(x, 2) = C;
  for (int x = 10 + gap; x < 20 + gap; ++x) m(x, 2) = C;
  return m;
}

TEST(FillGaps, BridgesGapsWithinTheBlob) {
  const auto m = two_segments(3);  // endpoints 4 apart, reach 2*2 = 4
  const auto out = banding::fill_gaps(m, 2);
  for (int x = 0; x < 23; ++x) EXPECT_EQ(out(x, 2), C) << x;
  const auto sizes = oracle::component_sizes(30, 5, [&](int x, int y) { return out(x, y) == C; });
  EXPECT_EQ(sizes.size(), 1u);
}

TEST(FillGaps, LeavesWideGapsOpen) {
  const auto m = two_segments(4);  // endpoints 5 apart
  const auto out = banding::fill_gaps(m, 2);
  EXPECT_EQ(out, m);
}

TEST(FillGaps, DoesNotBridgeAcrossTexture) {
  auto m = two_segments(3);
  m(11, 2) = T;
  const auto out = banding::fill_gaps(m, 2);
  EXPECT_EQ(out(10, 2), F);
  EXPECT_EQ(out(12, 2), F);
}

TEST(FillGaps, ZeroRadiusIsIdentity) {
  const auto m = two_segments(1);
  EXPECT_EQ(banding::fill_gaps(m, 0), m);
  EXPECT_THROW(banding::fill_gaps(m, -1), banding::ConfigError);
}

TEST(Link, ComponentsMatchFloodFillOracle) {
  std::mt19937 rng(3);
  std::bernoulli_distribution on(0.3);
  for (int trial = 0; trial < 20; ++trial) {
    PixelClassMap m(24, 18, F);
    for (auto& v : m.pixels()) v = on(rng) ? C : F;
    const int min_len = 1 + trial % 6;
    const auto bem = banding::link_and_label(m, min_len);
    auto sizes = oracle::component_sizes(24, 18, [&](int x, int y) { return m(x, y) == C; });
    sizes.erase(std::remove_if(sizes.begin(), sizes.end(), [&](int s) { return s < min_len; }), sizes.end());
    std::vector<int> got;
    for (const auto& e : bem.edges) got.push_back(static_cast<int>(e.length()));
    std::sort(sizes.begin(), sizes.end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, sizes);
    // Labels are 1..K, every labelled pixel belongs to exactly its edge.
    for (std::size_t k = 0; k < bem.edges.size(); ++k) {
      const auto& e = bem.edges[k];
      EXPECT_EQ(e.label, static_cast<int>(k) + 1);
      std::set<std::pair<int, int>> unique;
      for (const Point p : e.points) {
        EXPECT_EQ(bem.labels(p.x, p.y), e.label);
        unique.insert({p.x, p.y});
      }
      EXPECT_EQ(unique.size(), e.points.size());
    }
    std::size_t labelled = 0;
    for (auto v : bem.labels.pixels()) labelled += v > 0;
    std::size_t total = 0;
    for (const auto& e : bem.edges) total += e.length();
    EXPECT_EQ(labelled, total);
  }
}

TEST(Link, OpenLineIsOrderedFromAnEndpoint) {
  PixelClassMap m(20, 3, F);
  for (int x = 2; x < 18; ++x) m(x, 1) = C;
  const auto bem = banding::link_and_label(m, 16);
  ASSERT_EQ(bem.edge_count(), 1u);
  const auto& e = bem.edges[0];
  EXPECT_FALSE(e.closed);
  EXPECT_EQ(e.points.front(), (Point{2, 1}));
  EXPECT_EQ(e.points.back(), (Point{17, 1}));
  for (std::size_t i = 1; i < e.points.size(); ++i) {
    EXPECT_TRUE(banding::detail::adjacent8(e.points[i - 1], e.points[i]));
  }
  EXPECT_EQ(banding::link_and_label(m, 17).edge_count(), 0u);
}

TEST(Link, RingIsClosed) {
  PixelClassMap m(12, 12, F);
  for (int i = 2; i <= 8; ++i) {
    m(i, 2) = C;
    m(i, 8) = C;
    m(2, i) = C;
    m(8, i) = C;
  }
  const auto bem = banding::link_and_label(m, 4);
  ASSERT_EQ(bem.edge_count(), 1u);
  EXPECT_TRUE(bem.edges[0].closed);
  EXPECT_EQ(bem.edges[0].length(), 24u);
}

TEST(Extract, StraightStepYieldsOneFullHeightEdge) {
  // Candidate-strength gradient along a vertical boundary.
  Plane<double> mag(40, 30, 0.0);
  for (int y = 0; y < 30; ++y) {
    mag(19, y) = 4.0;
    mag(20, y) = 6.0;
    mag(21, y) = 4.0;
  }
  const auto bem = banding::extract_banding_edges(field(mag), {});
  ASSERT_EQ(bem.edge_count(), 1u);
  EXPECT_EQ(bem.edges[0].length(), 30u);
  for (const Point p : bem.edges[0].points) EXPECT_EQ(p.x, 20);
}

TEST(Extract, TextureRegionProducesNoEdges) {
  Plane<double> mag(20, 20, 30.0);
  EXPECT_EQ(banding::extract_banding_edges(field(mag), {}).edge_count(), 0u);
}

}  // namespace
