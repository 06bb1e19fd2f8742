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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace igaf {

enum class DType { f32, f64 };

template <typename T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<float>() { return DType::f32; }
template <>
constexpr DType dtype_of<double>() { return DType::f64; }

std::string_view to_string(DType dtype);

/// [N, C, H, W] extent of a tensor.
struct Shape {
  std::int64_t n = 0;
  std::int64_t c = 0;
  std::int64_t h = 0;
  std::int64_t w = 0;

  std::int64_t numel() const { return n * c * h * w; }
  std::int64_t plane() const { return h * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

/// Dense NCHW tensor. Copies are shallow handles onto shared storage, which
/// is how the gradient tape links outputs back to their inputs; use clone()
/// for an independent copy.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  static Tensor zeros(const Shape& shape, bool requires_grad = false);
  static Tensor full(const Shape& shape, T value, bool requires_grad = false);
  static Tensor from_data(const Shape& shape, std::vector<T> data,
                          bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::int64_t numel() const { return shape().numel(); }
  DType dtype() const { return dtype_of<T>(); }
  /// Process-unique id; later tensors always have larger ids.
  std::uint64_t id() const;

  std::span<const T> data() const&;
  // Spans into a temporary would dangle.
  std::span<const T> data() const&& = delete;
  std::span<T> mutable_data();

  T at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const;
  T& at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w);
  /// The single value of a [1,1,1,1] tensor.
  T item() const;

  bool requires_grad() const;
  void set_requires_grad(bool value);

  bool has_grad() const;
  std::span<const T> grad() const;
  std::span<T> mutable_grad() const;
  /// Allocates the gradient buffer (zero-filled) if absent and returns it.
  std::span<T> ensure_grad() const;
  /// Fills an existing gradient with zeros, allocating it if needed.
  void zero_grad();
  void clear_grad();

  /// Deep copy of data only; the result does not require grad.
  Tensor clone() const;

  template <typename U>
  Tensor<U> cast() const;

  /// Throws NumericError naming `what` if any value is NaN or infinite.
  void assert_finite(std::string_view what) const;
  bool all_finite() const;

 private:
  struct Impl {
    Shape shape;
    std::vector<T> data;
    std::vector<T> grad;
    bool has_grad = false;
    bool requires_grad = false;
    std::uint64_t id = 0;
  };

  explicit Tensor(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  Impl& impl() const;

  std::shared_ptr<Impl> impl_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

extern template class Tensor<float>;
extern template class Tensor<double>;

/// Shape of a bias or channel gate: [1, C, 1, 1].
inline Shape channel_shape(std::int64_t c) { return {1, c, 1, 1}; }

}  // namespace igaf
