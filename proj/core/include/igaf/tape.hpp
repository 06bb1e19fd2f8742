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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "igaf/tensor.hpp"

namespace igaf {

/// Records differentiable ops in execution order and replays their backward
/// rules in reverse. One tape serves exactly one forward/backward pair; call
/// clear() before reusing it.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void()>;

  explicit Tape(bool enabled = true) : enabled_(enabled) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool enabled() const { return enabled_; }
  void set_enabled(bool enabled) { enabled_ = enabled; }

  /// True if an op over these inputs must be recorded.
  bool wants(std::initializer_list<const Tensor<T>*> inputs) const;

  /// Appends a node. `output` must have been created after every input.
  void record(std::vector<Tensor<T>> inputs, const Tensor<T>& output,
              BackwardFn backward);

  /// Seeds d(loss)/d(loss) = 1 and runs every node's rule in reverse order.
  /// Leaf inputs that requested gradients but were not reached get zeros.
  void backward(const Tensor<T>& loss);

  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }
  void clear();

 private:
  struct Node {
    std::vector<Tensor<T>> inputs;
    Tensor<T> output;
    BackwardFn backward;
  };

  bool enabled_;
  bool consumed_ = false;
  std::vector<Node> nodes_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace igaf

namespace igaf {
using TapeF = Tape<float>;
using TapeD = Tape<double>;
}  // namespace igaf
