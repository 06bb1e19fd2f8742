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

#include "igaf/params.hpp"

#include <cmath>
#include <cstring>

#include "igaf/error.hpp"
#include "igaf/rng.hpp"

namespace igaf {

template <typename T>
Tensor<T>& ParamStore<T>::add(const std::string& name, const Shape& shape) {
  if (index_.count(name)) throw ConfigError("duplicate parameter name '" + name + "'");
  index_.emplace(name, entries_.size());
  entries_.push_back(Entry{name, Tensor<T>::zeros(shape, true)});
  return entries_.back().value;
}

template <typename T>
bool ParamStore<T>::contains(std::string_view name) const {
  return index_.count(std::string(name)) != 0;
}

template <typename T>
const Tensor<T>& ParamStore<T>::at(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ConfigError("missing parameter '" + std::string(name) + "'");
  return entries_[it->second].value;
}

template <typename T>
Tensor<T>& ParamStore<T>::at(std::string_view name) {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ConfigError("missing parameter '" + std::string(name) + "'");
  return entries_[it->second].value;
}

template <typename T>
std::int64_t ParamStore<T>::num_scalars() const {
  std::int64_t total = 0;
  for (const auto& e : entries_) total += e.value.numel();
  return total;
}

template <typename T>
void ParamStore<T>::zero_grad() {
  for (auto& e : entries_) e.value.zero_grad();
}

template <typename T>
void ParamStore<T>::clear_grad() {
  for (auto& e : entries_) e.value.clear_grad();
}

template <typename T>
void ParamStore<T>::fill(T value) {
  for (auto& e : entries_) {
    for (T& v : e.value.mutable_data()) v = value;
  }
}

template <typename T>
ParamStore<T> ParamStore<T>::clone() const {
  return cast<T>();
}

template <typename T>
template <typename U>
ParamStore<U> ParamStore<T>::cast() const {
  ParamStore<U> out;
  for (const auto& e : entries_) {
    Tensor<U>& dst = out.add(e.name, e.value.shape());
    auto d = dst.mutable_data();
    const auto s = e.value.data();
    for (std::size_t i = 0; i < s.size(); ++i) d[i] = static_cast<U>(s[i]);
  }
  return out;
}

template <typename T>
bool ParamStore<T>::identical(const ParamStore& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& a = entries_[i];
    const auto& b = other.entries_[i];
    if (a.name != b.name || a.value.shape() != b.value.shape()) return false;
    if (std::memcmp(a.value.data().data(), b.value.data().data(),
                    a.value.data().size() * sizeof(T)) != 0) {
      return false;
    }
  }
  return true;
}

template class ParamStore<float>;
template class ParamStore<double>;
template ParamStore<double> ParamStore<float>::cast<double>() const;
template ParamStore<float> ParamStore<double>::cast<float>() const;

double kaiming_bound(std::int64_t fan_in, double leaky_slope) {
  const double gain = std::sqrt(2.0 / (1.0 + leaky_slope * leaky_slope));
  return gain * std::sqrt(3.0 / static_cast<double>(fan_in));
}

template <typename T>
ParamStore<T> init_from_specs(const ParamSpecs& specs, double leaky_slope, std::uint64_t seed) {
  ParamStore<T> store;
  Rng rng(seed);
  for (const auto& spec : specs) {
    Tensor<T>& t = store.add(spec.name, spec.shape);
    if (spec.fan_in == 0 || spec.zero_init) continue;
    const double bound = kaiming_bound(spec.fan_in, leaky_slope);
    for (T& v : t.mutable_data()) v = static_cast<T>(rng.uniform(-bound, bound));
  }
  return store;
}

template ParamStore<float> init_from_specs(const ParamSpecs&, double, std::uint64_t);
template ParamStore<double> init_from_specs(const ParamSpecs&, double, std::uint64_t);

std::int64_t count_scalars(const ParamSpecs& specs) {
  std::int64_t total = 0;
  for (const auto& s : specs) total += s.shape.numel();
  return total;
}

}  // namespace igaf
