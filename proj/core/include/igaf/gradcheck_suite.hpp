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

#include <string>
#include <string_view>
#include <vector>

namespace igaf {

inline constexpr double kGradCheckTolerance = 1e-5;
inline constexpr double kGradCheckEps = 1e-4;

struct BlockGradCheck {
  std::string block;
  double max_rel_error = 0.0;
  bool passed() const { return max_rel_error < kGradCheckTolerance; }
};

/// Names accepted by run_gradcheck_suite, in run order.
std::vector<std::string> gradcheck_block_names();

/// f64 finite-difference check of one block (or all when `block` is empty)
/// against reverse-mode gradients, w.r.t. inputs and parameters, dropout in
/// eval mode, random inputs in [-0.5, 0.5] kept at least 1e-3 from zero.
/// Throws ConfigError for an unknown block name.
std::vector<BlockGradCheck> run_gradcheck_suite(std::string_view block = {});

}  // namespace igaf
