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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "igaf/tensor.hpp"

namespace igaf {

/// Declaration of one learnable tensor before it is materialized.
struct ParamSpec {
  std::string name;
  Shape shape;
  std::int64_t fan_in = 0;  // 0 marks a bias
  bool zero_init = false;   // weight starts at zero instead of Kaiming
};

using ParamSpecs = std::vector<ParamSpec>;

/// Named learnable tensors in registration order.
template <typename T>
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Tensor<T> value;
  };

  /// Registers a zero-filled tensor that requires grad.
  Tensor<T>& add(const std::string& name, const Shape& shape);

  bool contains(std::string_view name) const;
  /// Throws ConfigError naming the parameter if it is absent.
  const Tensor<T>& at(std::string_view name) const;
  Tensor<T>& at(std::string_view name);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::int64_t num_scalars() const;

  void zero_grad();
  void clear_grad();
  void fill(T value);

  /// Deep copy with independent storage.
  ParamStore clone() const;

  template <typename U>
  ParamStore<U> cast() const;

  /// Bitwise equality of names, shapes and data.
  bool identical(const ParamStore& other) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

extern template class ParamStore<float>;
extern template class ParamStore<double>;

/// Materializes specs with Kaiming-uniform weights (fan-in, gain adjusted for
/// the LeakyReLU slope), zero biases, and zero weights where zero_init is set. Deterministic in (specs, seed).
template <typename T>
ParamStore<T> init_from_specs(const ParamSpecs& specs, double leaky_slope,
                              std::uint64_t seed);

/// Half-width of the Kaiming-uniform interval for a given fan-in.
double kaiming_bound(std::int64_t fan_in, double leaky_slope);

std::int64_t count_scalars(const ParamSpecs& specs);

}  // namespace igaf
