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

#include <cstdint>
#include <vector>

#include "igaf/config.hpp"
#include "igaf/params.hpp"
#include "igaf/tape.hpp"
#include "igaf/tensor.hpp"

namespace igaf {

/// Mean absolute error over all elements, as a [1,1,1,1] tensor.
/// Differentiable w.r.t. pred; the subgradient at exact ties is 0.
template <typename T>
Tensor<T> l1_loss(Tape<T>& tape, const Tensor<T>& pred, const Tensor<T>& target);

/// Root mean squared error accumulated in double precision.
template <typename T>
double rmse(const Tensor<T>& pred, const Tensor<T>& target);

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First and second moment buffers, one per parameter in store order.
template <typename T>
struct AdamState {
  AdamHyper hyper;
  std::int64_t step = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;

  static AdamState for_params(const ParamStore<T>& params, AdamHyper hyper = {});
};

/// Bias-corrected Adam update; clears gradients afterwards. Throws
/// NumericError if any parameter has no gradient.
template <typename T>
void adam_step(ParamStore<T>& params, AdamState<T>& state, double lr);

/// base_lr * gamma^(number of milestones <= epoch).
float lr_at(const Schedule& schedule, int epoch);

}  // namespace igaf
