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

#include "igaf/rng.hpp"
#include "igaf/tape.hpp"
#include "igaf/tensor.hpp"

// Differentiable forward ops. Every op records a backward rule on `tape` when
// the tape is enabled and at least one input requires grad.
namespace igaf::ops {

/// Stride-1 cross-correlation. weight is [Cout, Cin, k, k] with k odd; bias is
/// [1, Cout, 1, 1] or undefined. Output spatial size is
/// H + 2*padding - dilation*(k-1).
template <typename T>
Tensor<T> conv2d(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>& bias, int padding, int dilation);

/// Affine map along the channel axis at every spatial location.
/// weight is [Cout, Cin, 1, 1], bias is [1, Cout, 1, 1].
template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>& bias);

enum class ActivationKind { leaky_relu, relu, sigmoid };

struct Activation {
  ActivationKind kind = ActivationKind::leaky_relu;
  double slope = 0.1;  // leaky_relu only

  static Activation leaky(double slope) { return {ActivationKind::leaky_relu, slope}; }
  static Activation relu() { return {ActivationKind::relu, 0.0}; }
  static Activation sigmoid() { return {ActivationKind::sigmoid, 0.0}; }
};

template <typename T>
Tensor<T> activation(Tape<T>& tape, const Tensor<T>& input, Activation act);

template <typename T>
Tensor<T> leaky_relu(Tape<T>& tape, const Tensor<T>& input, double slope) {
  return activation(tape, input, Activation::leaky(slope));
}
template <typename T>
Tensor<T> relu(Tape<T>& tape, const Tensor<T>& input) {
  return activation(tape, input, Activation::relu());
}
template <typename T>
Tensor<T> sigmoid(Tape<T>& tape, const Tensor<T>& input) {
  return activation(tape, input, Activation::sigmoid());
}

/// Per-(n, c) mean over H*W. Output is [N, C, 1, 1].
template <typename T>
Tensor<T> global_avg_pool(Tape<T>& tape, const Tensor<T>& input);

/// Element-wise sum. Shapes must match exactly, or one side may be an
/// [N, C, 1, 1] gate broadcast over an [N, C, H, W] map.
template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);

/// Element-wise product with the same single broadcast as add().
template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);

/// Inverted dropout. Identity when !training or p == 0; otherwise zeroes each
/// element with probability p and scales survivors by 1/(1-p).
template <typename T>
Tensor<T> dropout(Tape<T>& tape, const Tensor<T>& input, double p, bool training,
                  Rng& rng);

/// Channel concatenation of two [N, *, H, W] tensors.
template <typename T>
Tensor<T> concat_channels(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);

/// Sum of all elements as a [1, 1, 1, 1] tensor.
template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& input);

/// Multiplies every element by a constant.
template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& input, T factor);

}  // namespace igaf::ops
