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

#include "igaf/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "igaf/error.hpp"

namespace igaf {
namespace {

std::atomic<std::uint64_t> g_next_id{1};

void check_shape(const Shape& s) {
  if (s.n < 0 || s.c < 0 || s.h < 0 || s.w < 0) {
    throw ShapeError("negative tensor extent " + s.str());
  }
}

}  // namespace

std::string_view to_string(DType dtype) {
  return dtype == DType::f32 ? "f32" : "f64";
}

std::string Shape::str() const {
  std::ostringstream os;
  os << '[' << n << ',' << c << ',' << h << ',' << w << ']';
  return os.str();
}

template <typename T>
Tensor<T> Tensor<T>::zeros(const Shape& shape, bool requires_grad) {
  return full(shape, T(0), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::full(const Shape& shape, T value, bool requires_grad) {
  check_shape(shape);
  return from_data(shape, std::vector<T>(static_cast<std::size_t>(shape.numel()), value),
                   requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::from_data(const Shape& shape, std::vector<T> data,
                               bool requires_grad) {
  check_shape(shape);
  if (static_cast<std::int64_t>(data.size()) != shape.numel()) {
    throw ShapeError("data length " + std::to_string(data.size()) +
                     " does not match shape " + shape.str());
  }
  auto impl = std::make_shared<Impl>();
  impl->shape = shape;
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  impl->id = g_next_id.fetch_add(1, std::memory_order_relaxed);
  return Tensor(std::move(impl));
}

template <typename T>
typename Tensor<T>::Impl& Tensor<T>::impl() const {
  if (!impl_) throw Error("use of an undefined tensor");
  return *impl_;
}

template <typename T>
const Shape& Tensor<T>::shape() const {
  return impl().shape;
}

template <typename T>
std::uint64_t Tensor<T>::id() const {
  return impl().id;
}

template <typename T>
std::span<const T> Tensor<T>::data() const& {
  return impl().data;
}

template <typename T>
std::span<T> Tensor<T>::mutable_data() {
  return impl().data;
}

template <typename T>
T Tensor<T>::at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const {
  const Shape& s = shape();
  return impl().data[static_cast<std::size_t>(((n * s.c + c) * s.h + h) * s.w + w)];
}

template <typename T>
T& Tensor<T>::at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
  const Shape& s = shape();
  return impl().data[static_cast<std::size_t>(((n * s.c + c) * s.h + h) * s.w + w)];
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw ShapeError("item() on tensor of shape " + shape().str());
  return impl().data[0];
}

template <typename T>
bool Tensor<T>::requires_grad() const {
  return impl().requires_grad;
}

template <typename T>
void Tensor<T>::set_requires_grad(bool value) {
  impl().requires_grad = value;
}

template <typename T>
bool Tensor<T>::has_grad() const {
  return impl().has_grad;
}

template <typename T>
std::span<const T> Tensor<T>::grad() const {
  if (!impl().has_grad) throw NumericError("tensor has no gradient");
  return impl().grad;
}

template <typename T>
std::span<T> Tensor<T>::mutable_grad() const {
  if (!impl().has_grad) throw NumericError("tensor has no gradient");
  return impl().grad;
}

template <typename T>
std::span<T> Tensor<T>::ensure_grad() const {
  Impl& im = impl();
  if (!im.has_grad) {
    im.grad.assign(im.data.size(), T(0));
    im.has_grad = true;
  }
  return im.grad;
}

template <typename T>
void Tensor<T>::zero_grad() {
  Impl& im = impl();
  im.grad.assign(im.data.size(), T(0));
  im.has_grad = true;
}

template <typename T>
void Tensor<T>::clear_grad() {
  Impl& im = impl();
  im.grad.clear();
  im.grad.shrink_to_fit();
  im.has_grad = false;
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  return from_data(shape(), std::vector<T>(data().begin(), data().end()));
}

template <typename T>
template <typename U>
Tensor<U> Tensor<T>::cast() const {
  std::vector<U> out(data().begin(), data().end());
  return Tensor<U>::from_data(shape(), std::move(out));
}

template <typename T>
bool Tensor<T>::all_finite() const {
  return std::all_of(data().begin(), data().end(),
                     [](T v) { return std::isfinite(v); });
}

template <typename T>
void Tensor<T>::assert_finite(std::string_view what) const {
  const auto values = data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite value " << values[i] << " at flat index " << i << " of "
         << what << ' ' << shape().str();
      throw NumericError(os.str());
    }
  }
}

template class Tensor<float>;
template class Tensor<double>;
template Tensor<double> Tensor<float>::cast<double>() const;
template Tensor<float> Tensor<double>::cast<float>() const;
template Tensor<float> Tensor<float>::cast<float>() const;
template Tensor<double> Tensor<double>::cast<double>() const;

}  // namespace igaf
