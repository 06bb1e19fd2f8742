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

#include "igaf/resize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "igaf/error.hpp"

namespace igaf {
namespace {

constexpr double kCubicA = -0.5;

struct Taps {
  std::array<std::int64_t, 4> index;
  std::array<double, 4> weight;
  int anchor;  // tap holding the sample nearest the source position
};

// Precomputes the four clamped taps for every output coordinate.
std::vector<Taps> make_taps(std::int64_t in, std::int64_t out) {
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  for (std::int64_t o = 0; o < out; ++o) {
    const double src = (static_cast<double>(o) + 0.5) * ratio - 0.5;
    const double base = std::floor(src);
    const double t = src - base;
    Taps& tp = taps[static_cast<std::size_t>(o)];
    for (int i = 0; i < 4; ++i) {
      const auto idx = static_cast<std::int64_t>(base) - 1 + i;
      tp.index[i] = std::clamp<std::int64_t>(idx, 0, in - 1);
      tp.weight[i] = cubic_weight(t - (i - 1));
    }
    tp.anchor = t < 0.5 ? 1 : 2;
  }
  return taps;
}

// Interpolates relative to the anchor tap so that constant rows come out
// exactly constant regardless of how the weights round.
template <typename Get>
double interpolate(const Taps& tp, Get&& get) {
  const double ref = get(tp.index[tp.anchor]);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += tp.weight[i] * (get(tp.index[i]) - ref);
  return ref + acc;
}

}  // namespace

double cubic_weight(double x) {
  const double ax = std::fabs(x);
  if (ax <= 1.0) return ((kCubicA + 2.0) * ax - (kCubicA + 3.0)) * ax * ax + 1.0;
  if (ax < 2.0) return ((kCubicA * ax - 5.0 * kCubicA) * ax + 8.0 * kCubicA) * ax - 4.0 * kCubicA;
  return 0.0;
}

template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& input, std::int64_t out_h, std::int64_t out_w) {
  const Shape s = input.shape();
  if (out_h < 1 || out_w < 1) {
    throw ShapeError("bicubic_resize: target size must be positive");
  }
  if (s.h < 1 || s.w < 1) throw ShapeError("bicubic_resize: empty input " + s.str());
  const auto tx = make_taps(s.w, out_w);
  const auto ty = make_taps(s.h, out_h);

  Tensor<T> out = Tensor<T>::zeros(Shape{s.n, s.c, out_h, out_w});
  std::vector<double> rows(static_cast<std::size_t>(s.h * out_w));
  const auto x = input.data();
  auto y = out.mutable_data();
  for (std::int64_t nc = 0; nc < s.n * s.c; ++nc) {
    const T* src = x.data() + nc * s.plane();
    for (std::int64_t r = 0; r < s.h; ++r) {
      const T* line = src + r * s.w;
      for (std::int64_t o = 0; o < out_w; ++o) {
        rows[r * out_w + o] = interpolate(
            tx[o], [line](std::int64_t i) { return static_cast<double>(line[i]); });
      }
    }
    T* dst = y.data() + nc * out_h * out_w;
    for (std::int64_t o = 0; o < out_h; ++o) {
      for (std::int64_t c = 0; c < out_w; ++c) {
        dst[o * out_w + c] = static_cast<T>(interpolate(
            ty[o], [&rows, c, out_w](std::int64_t i) { return rows[i * out_w + c]; }));
      }
    }
  }
  return out;
}

template Tensor<float> bicubic_resize(const Tensor<float>&, std::int64_t, std::int64_t);
template Tensor<double> bicubic_resize(const Tensor<double>&, std::int64_t, std::int64_t);

}  // namespace igaf
