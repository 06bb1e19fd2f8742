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

#include "igaf/tensor.hpp"

namespace igaf {

/// Separable Catmull-Rom (a = -0.5) resampling with half-pixel centers and
/// edge clamping. Not differentiable; used for inputs and targets only.
template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& input, std::int64_t out_h,
                         std::int64_t out_w);

/// Catmull-Rom kernel weight at distance x.
double cubic_weight(double x);

}  // namespace igaf
