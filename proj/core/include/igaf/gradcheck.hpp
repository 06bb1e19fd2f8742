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

#include <functional>
#include <span>
#include <vector>

#include "igaf/tape.hpp"
#include "igaf/tensor.hpp"

namespace igaf {

using GradCheckFn =
    std::function<TensorD(TapeD&, std::span<const TensorD> inputs)>;

/// Compares reverse-mode gradients against central finite differences.
///
/// The output of f is reduced to a scalar through a fixed random projection,
/// so every output element participates. Returns the maximum over all input
/// coordinates of |analytic - numeric| / max(1, |analytic|, |numeric|).
/// Inputs are perturbed in place and restored. Throws NumericError if two
/// evaluations at the same point differ.
double grad_check(const GradCheckFn& f, std::vector<TensorD> inputs,
                  double eps = 1e-4, std::uint64_t projection_seed = 7);

}  // namespace igaf
