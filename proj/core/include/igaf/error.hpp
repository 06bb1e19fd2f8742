// Copyright 2026 The IGAF Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace igaf {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes or invalid op arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, unknown keys, or usage mistakes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, missing, or malformed data and checkpoint files.
class DataError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf, failed gradient checks, misuse of the gradient tape.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace igaf
