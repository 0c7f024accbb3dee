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

// Scores synthetic ramps of increasing quantisation step and prints the
// frame score, edge count and pooled visibility for each.

#include <iomanip>
#include <iostream>

#include "banding/banding.hpp"

int main() {
  banding::AnalysisConfig config;
  std::cout << std::setw(4) << "q" << std::setw(8) << "edges" << std::setw(16) << "score" << '\n';
  for (int q : {2, 4, 8, 16, 32}) {
    banding::SyntheticBandingSpec spec;
    spec.step = q;
    const auto video = banding::generate_banding_fixture(spec);
    const auto analysis = banding::analyze_frame(video.frames.front(), config);
    std::cout << std::setw(4) << q << std::setw(8) << analysis.bem.edge_count() << std::setw(16)
              << std::setprecision(6) << analysis.score.score << '\n';
  }
}
