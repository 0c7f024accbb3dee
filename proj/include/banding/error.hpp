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

#include <stdexcept>
#include <string>

namespace banding {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated input data (Y4M headers, raw streams, CSV tables).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its documented bounds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Inputs whose dimensions disagree, or a frame too small for an operator.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// File-system level failure (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace banding
