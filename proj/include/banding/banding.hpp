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

// Umbrella header.

#include "banding/config.hpp"
#include "banding/edge_extraction.hpp"
#include "banding/error.hpp"
#include "banding/evaluation.hpp"
#include "banding/frame_io.hpp"
#include "banding/image.hpp"
#include "banding/pgm.hpp"
#include "banding/pipeline.hpp"
#include "banding/preprocess.hpp"
#include "banding/scoring.hpp"
#include "banding/visibility.hpp"

namespace banding {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace banding
