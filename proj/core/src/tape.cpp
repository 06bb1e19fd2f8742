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

#include "igaf/tape.hpp"

#include <unordered_set>

#include "igaf/error.hpp"

namespace igaf {

template <typename T>
bool Tape<T>::wants(std::initializer_list<const Tensor<T>*> inputs) const {
  if (!enabled_) return false;
  for (const Tensor<T>* t : inputs) {
    if (t != nullptr && t->defined() && t->requires_grad()) return true;
  }
  return false;
}

template <typename T>
void Tape<T>::record(std::vector<Tensor<T>> inputs, const Tensor<T>& output,
                     BackwardFn backward) {
  if (consumed_) {
    throw NumericError("recording onto a tape that already ran backward; clear() it first");
  }
  for (const auto& in : inputs) {
    if (in.defined() && in.id() >= output.id()) {
      throw NumericError("tape node output precedes one of its inputs");
    }
  }
  nodes_.push_back(Node{std::move(inputs), output, std::move(backward)});
}

template <typename T>
void Tape<T>::backward(const Tensor<T>& loss) {
  if (consumed_) {
    throw NumericError("backward already ran on this tape; run a new forward pass");
  }
  if (loss.numel() != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " + loss.shape().str());
  }
  if (!loss.requires_grad()) {
    throw NumericError("loss is not connected to any tensor that requires grad");
  }
  consumed_ = true;

  Tensor<T> seed = loss;
  seed.ensure_grad()[0] += T(1);

  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (!it->output.has_grad()) continue;
    it->backward();
  }

  // Leaves that requested gradients but sit off the loss path get zeros.
  std::unordered_set<std::uint64_t> produced;
  for (const auto& node : nodes_) produced.insert(node.output.id());
  for (auto& node : nodes_) {
    for (auto& in : node.inputs) {
      if (in.defined() && in.requires_grad() && !produced.count(in.id())) {
        in.ensure_grad();
      }
    }
  }
}

template <typename T>
void Tape<T>::clear() {
  nodes_.clear();
  consumed_ = false;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace igaf
