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

#include <random>
#include <set>
#include <sstream>

#include "banding/evaluation.hpp"
#include "oracle.hpp"

namespace {

using banding::ScoredItem;

std::vector<ScoredItem> make_items(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<ScoredItem> items;
  for (std::size_t i = 0; i < x.size(); ++i) items.push_back({"v" + std::to_string(i), x[i], y[i]});
  return items;
}

TEST(RankCorrelation, PerfectAndReversedOrder) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{10, 20, 30, 40, 50};
  const std::vector<double> down{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(banding::spearman(x, up), 1.0);
  EXPECT_DOUBLE_EQ(banding::kendall_tau_b(x, up), 1.0);
  EXPECT_DOUBLE_EQ(banding::spearman(x, down), -1.0);
  EXPECT_DOUBLE_EQ(banding::kendall_tau_b(x, down), -1.0);
}

TEST(RankCorrelation, AverageRanksForTies) {
  const std::vector<double> v{3, 1, 3, 2, 3};
  const auto r = banding::detail::average_ranks(v);
  EXPECT_EQ(r, (std::vector<double>{4, 1, 4, 2, 4}));
}

TEST(RankCorrelation, MatchesPairwiseOracleWithTies) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial * 3;
    std::uniform_int_distribution<int> coarse(0, 6);  // many ties
    std::normal_distribution<double> fine(0.0, 1.0);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = trial % 2 ? coarse(rng) : fine(rng);
      y[i] = coarse(rng) + 0.3 * x[i];
    }
    EXPECT_NEAR(banding::spearman(x, y), oracle::spearman(x, y), 1e-12);
    EXPECT_NEAR(banding::kendall_tau_b(x, y), oracle::kendall_tau_b(x, y), 1e-12);
  }
}

TEST(Logistic, RecoversNoiselessParameters) {
  const banding::LogisticParams truth{4.5, 1.2, 0.4, 0.08};
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i / 39.0);
    y.push_back(truth(x.back()));
  }
  const auto items = make_items(x, y);
  const auto fit = banding::fit_logistic(items);
  EXPECT_NEAR(fit.b1, truth.b1, 1e-4);
  EXPECT_NEAR(fit.b2, truth.b2, 1e-4);
  EXPECT_NEAR(fit.b3, truth.b3, 1e-4);
  EXPECT_NEAR(std::abs(fit.b4), truth.b4, 1e-4);
}

TEST(Logistic, DecreasingRelationship) {
  // Higher banding score, lower quality.
  const banding::LogisticParams truth{1.0, 5.0, 0.002, 0.0005};
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(0.004 * i / 29.0);
    y.push_back(truth(x.back()));
  }
  const auto report = banding::evaluate(make_items(x, y));
  EXPECT_NEAR(report.plcc, 1.0, 1e-6);
  EXPECT_NEAR(report.rmse, 0.0, 1e-5);
  EXPECT_DOUBLE_EQ(report.srcc, -1.0);
}

TEST(Logistic, RejectsDegenerateInput) {
  EXPECT_THROW(banding::fit_logistic(make_items({1, 2, 3, 4}, {1, 2, 3, 4})), banding::Error);
  EXPECT_THROW(banding::fit_logistic(make_items({2, 2, 2, 2, 2}, {1, 2, 3, 4, 5})), banding::Error);
}

TEST(Correlations, LinearMetricsUseMappedScores) {
  std::mt19937 rng(2);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i * 0.1);
    y.push_back(1.0 + 4.0 / (1.0 + std::exp(-(x.back() - 2.5))) + noise(rng));
  }
  const auto items = make_items(x, y);
  const auto report = banding::evaluate(items);
  std::vector<double> mapped;
  double sq = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mapped.push_back(report.logistic(x[i]));
    sq += (mapped.back() - y[i]) * (mapped.back() - y[i]);
  }
  EXPECT_NEAR(report.plcc, oracle::pearson(mapped, y), 1e-12);
  EXPECT_NEAR(report.rmse, std::sqrt(sq / x.size()), 1e-12);
  EXPECT_NEAR(report.srcc, oracle::spearman(x, y), 1e-12);
  EXPECT_NEAR(report.krcc, oracle::kendall_tau_b(x, y), 1e-12);
  EXPECT_GT(report.plcc, 0.9);
}

TEST(ScoreTable, RoundTrip) {
  const auto items = make_items({0.125, 1e-7, 3.0}, {4.5, 2.0, 1.0});
  std::stringstream ss;
  banding::write_scored_items(ss, items);
  const auto back = banding::read_scored_items(ss);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].item_id, items[i].item_id);
    EXPECT_EQ(back[i].predicted, items[i].predicted);
    EXPECT_EQ(back[i].mos, items[i].mos);
  }
}

TEST(ScoreTable, ReportsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return banding::read_scored_items(in);
  };
  EXPECT_THROW(parse(""), banding::ParseError);
  EXPECT_THROW(parse("id,score,mos\n"), banding::ParseError);
  EXPECT_THROW(parse("item_id,predicted,mos\na,1\n"), banding::ParseError);
  EXPECT_THROW(parse("item_id,predicted,mos\na,x,2\n"), banding::ParseError);
  EXPECT_THROW(parse("item_id,predicted,mos\na,1,nan\n"), banding::ParseError);
  try {
    parse("item_id,predicted,mos\na,1,2\n\nb,2\n");
    FAIL();
  } catch (const banding::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
  EXPECT_EQ(parse("item_id,predicted,mos\r\na,1,2\r\n").size(), 1u);
}

TEST(Fixture, HorizontalRampHasExpectedBands) {
  banding::SyntheticBandingSpec spec;
  spec.step = 16;
  const auto video = banding::generate_banding_fixture(spec);
  ASSERT_EQ(video.frame_count(), 1u);
  const auto& plane = video.frames[0].plane;
  EXPECT_EQ(plane.width(), 256);
  EXPECT_EQ(plane.height(), 128);
  std::set<int> levels(plane.pixels().begin(), plane.pixels().end());
  EXPECT_EQ(levels.size(), 16u);
  EXPECT_EQ(*levels.begin(), 0);
  EXPECT_EQ(*levels.rbegin(), 240);
  for (int x = 1; x < 256; ++x) EXPECT_GE(plane(x, 5), plane(x - 1, 5));
  for (int y = 0; y < 128; ++y) EXPECT_EQ(plane(100, y), plane(100, 0));
}

TEST(Fixture, DitherIsSeededAndBounded) {
  banding::SyntheticBandingSpec spec;
  spec.dither = 3;
  spec.seed = 5;
  spec.frames = 2;
  const auto a = banding::generate_banding_fixture(spec);
  const auto b = banding::generate_banding_fixture(spec);
  EXPECT_EQ(a.frames[0].plane, b.frames[0].plane);
  EXPECT_EQ(a.frames[1].frame_index, 1);
  for (auto v : a.frames[0].plane.pixels()) EXPECT_EQ(v % 16, 0);
  spec.seed = 6;
  EXPECT_FALSE(banding::generate_banding_fixture(spec).frames[0].plane == a.frames[0].plane);
}

TEST(Fixture, ValidationErrors) {
  banding::SyntheticBandingSpec spec;
  spec.step = 0;
  EXPECT_THROW(banding::generate_banding_fixture(spec), banding::ConfigError);
  spec = {};
  spec.low = 200;
  spec.high = 100;
  EXPECT_THROW(banding::generate_banding_fixture(spec), banding::ConfigError);
}

}  // namespace
