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

#include "igaf/ops.hpp"

#include <cmath>

#include "igaf/error.hpp"

namespace igaf::ops {
namespace {

template <typename T>
Tensor<T> make_output(Tape<T>& tape, const Shape& shape,
                      std::initializer_list<const Tensor<T>*> inputs) {
  return Tensor<T>::zeros(shape, tape.wants(inputs));
}

bool is_gate_of(const Shape& gate, const Shape& map) {
  return gate.n == map.n && gate.c == map.c && gate.h == 1 && gate.w == 1 &&
         (map.h != 1 || map.w != 1);
}

enum class Broadcast { none, a_is_gate, b_is_gate };

Broadcast classify(const Shape& a, const Shape& b, const char* op) {
  if (a == b) return Broadcast::none;
  if (is_gate_of(a, b)) return Broadcast::a_is_gate;
  if (is_gate_of(b, a)) return Broadcast::b_is_gate;
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.str() + " and " +
                   b.str());
}

template <typename T>
T sigmoid_scalar(T x) {
  if (x >= T(0)) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace

template <typename T>
Tensor<T> activation(Tape<T>& tape, const Tensor<T>& input, Activation act) {
  Tensor<T> out = make_output(tape, input.shape(), {&input});
  const auto x = input.data();
  auto y = out.mutable_data();
  const T slope = static_cast<T>(act.slope);
  switch (act.kind) {
    case ActivationKind::leaky_relu:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : slope * x[i];
      break;
    case ActivationKind::relu:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
      break;
    case ActivationKind::sigmoid:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid_scalar(x[i]);
      break;
  }
  if (out.requires_grad()) {
    tape.record({input}, out, [input, out, act, slope]() mutable {
      const auto g = out.grad();
      const auto x = input.data();
      const auto y = out.data();
      auto gx = input.ensure_grad();
      switch (act.kind) {
        case ActivationKind::leaky_relu:
          // Derivative at exactly 0 is the negative slope.
          for (std::size_t i = 0; i < g.size(); ++i) gx[i] += x[i] > T(0) ? g[i] : slope * g[i];
          break;
        case ActivationKind::relu:
          for (std::size_t i = 0; i < g.size(); ++i) gx[i] += x[i] > T(0) ? g[i] : T(0);
          break;
        case ActivationKind::sigmoid:
          for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i] * (T(1) - y[i]);
          break;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool(Tape<T>& tape, const Tensor<T>& input) {
  const Shape s = input.shape();
  if (s.h < 1 || s.w < 1) {
    throw ShapeError("global_avg_pool: empty spatial extent " + s.str());
  }
  Tensor<T> out = make_output(tape, Shape{s.n, s.c, 1, 1}, {&input});
  const auto x = input.data();
  auto y = out.mutable_data();
  const std::int64_t plane = s.plane();
  for (std::int64_t nc = 0; nc < s.n * s.c; ++nc) {
    T acc = 0;
    const T* p = x.data() + nc * plane;
    for (std::int64_t i = 0; i < plane; ++i) acc += p[i];
    y[nc] = acc / static_cast<T>(plane);
  }
  if (out.requires_grad()) {
    tape.record({input}, out, [input, out, plane]() mutable {
      const auto g = out.grad();
      auto gx = input.ensure_grad();
      const T inv = T(1) / static_cast<T>(plane);
      for (std::size_t nc = 0; nc < g.size(); ++nc) {
        T* p = gx.data() + nc * plane;
        const T v = g[nc] * inv;
        for (std::int64_t i = 0; i < plane; ++i) p[i] += v;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  const Broadcast bc = classify(a.shape(), b.shape(), "add");
  const Tensor<T>& map = bc == Broadcast::a_is_gate ? b : a;
  const Tensor<T>& gate = bc == Broadcast::a_is_gate ? a : b;
  Tensor<T> out = make_output(tape, map.shape(), {&a, &b});
  auto y = out.mutable_data();
  const auto xm = map.data();
  const auto xg = gate.data();
  if (bc == Broadcast::none) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = xm[i] + xg[i];
  } else {
    const std::int64_t plane = map.shape().plane();
    for (std::size_t nc = 0; nc < xg.size(); ++nc) {
      for (std::int64_t i = 0; i < plane; ++i) y[nc * plane + i] = xm[nc * plane + i] + xg[nc];
    }
  }
  if (out.requires_grad()) {
    tape.record({a, b}, out, [map, gate, out, bc]() mutable {
      const auto g = out.grad();
      if (map.requires_grad()) {
        auto gm = map.ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i];
      }
      if (gate.requires_grad()) {
        auto gg = gate.ensure_grad();
        if (bc == Broadcast::none) {
          for (std::size_t i = 0; i < g.size(); ++i) gg[i] += g[i];
        } else {
          const std::int64_t plane = map.shape().plane();
          for (std::size_t nc = 0; nc < gg.size(); ++nc) {
            T acc = 0;
            for (std::int64_t i = 0; i < plane; ++i) acc += g[nc * plane + i];
            gg[nc] += acc;
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  const Broadcast bc = classify(a.shape(), b.shape(), "mul");
  const Tensor<T>& map = bc == Broadcast::a_is_gate ? b : a;
  const Tensor<T>& gate = bc == Broadcast::a_is_gate ? a : b;
  Tensor<T> out = make_output(tape, map.shape(), {&a, &b});
  auto y = out.mutable_data();
  const auto xm = map.data();
  const auto xg = gate.data();
  const std::int64_t plane = bc == Broadcast::none ? 1 : map.shape().plane();
  if (bc == Broadcast::none) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = xm[i] * xg[i];
  } else {
    for (std::size_t nc = 0; nc < xg.size(); ++nc) {
      for (std::int64_t i = 0; i < plane; ++i) y[nc * plane + i] = xm[nc * plane + i] * xg[nc];
    }
  }
  if (out.requires_grad()) {
    tape.record({a, b}, out, [map, gate, out, bc, plane]() mutable {
      const auto g = out.grad();
      const auto xm = map.data();
      const auto xg = gate.data();
      if (bc == Broadcast::none) {
        if (map.requires_grad()) {
          auto gm = map.ensure_grad();
          for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i] * xg[i];
        }
        if (gate.requires_grad()) {
          auto gg = gate.ensure_grad();
          for (std::size_t i = 0; i < g.size(); ++i) gg[i] += g[i] * xm[i];
        }
        return;
      }
      if (map.requires_grad()) {
        auto gm = map.ensure_grad();
        for (std::size_t nc = 0; nc < xg.size(); ++nc) {
          for (std::int64_t i = 0; i < plane; ++i) gm[nc * plane + i] += g[nc * plane + i] * xg[nc];
        }
      }
      if (gate.requires_grad()) {
        auto gg = gate.ensure_grad();
        for (std::size_t nc = 0; nc < xg.size(); ++nc) {
          T acc = 0;
          for (std::int64_t i = 0; i < plane; ++i) acc += g[nc * plane + i] * xm[nc * plane + i];
          gg[nc] += acc;
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> dropout(Tape<T>& tape, const Tensor<T>& input, double p, bool training,
                  Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ConfigError("dropout probability must be in [0, 1), got " + std::to_string(p));
  }
  if (!training || p == 0.0) return input;

  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::vector<T> mask(static_cast<std::size_t>(input.numel()));
  for (auto& m : mask) m = rng.uniform() < p ? T(0) : keep_scale;

  Tensor<T> out = make_output(tape, input.shape(), {&input});
  const auto x = input.data();
  auto y = out.mutable_data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * mask[i];
  if (out.requires_grad()) {
    tape.record({input}, out, [input, out, mask = std::move(mask)]() mutable {
      const auto g = out.grad();
      auto gx = input.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * mask[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> concat_channels(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  const Shape sa = a.shape();
  const Shape sb = b.shape();
  if (sa.n != sb.n || sa.h != sb.h || sa.w != sb.w) {
    throw ShapeError("concat_channels: incompatible shapes " + sa.str() + " and " + sb.str());
  }
  Tensor<T> out = make_output(tape, Shape{sa.n, sa.c + sb.c, sa.h, sa.w}, {&a, &b});
  auto y = out.mutable_data();
  const std::int64_t chunk_a = sa.c * sa.plane();
  const std::int64_t chunk_b = sb.c * sb.plane();
  for (std::int64_t n = 0; n < sa.n; ++n) {
    std::copy_n(a.data().data() + n * chunk_a, chunk_a, y.data() + n * (chunk_a + chunk_b));
    std::copy_n(b.data().data() + n * chunk_b, chunk_b,
                y.data() + n * (chunk_a + chunk_b) + chunk_a);
  }
  if (out.requires_grad()) {
    tape.record({a, b}, out, [a, b, out, chunk_a, chunk_b]() mutable {
      const auto g = out.grad();
      const std::int64_t batches = a.shape().n;
      if (a.requires_grad()) {
        auto ga = a.ensure_grad();
        for (std::int64_t n = 0; n < batches; ++n)
          for (std::int64_t i = 0; i < chunk_a; ++i)
            ga[n * chunk_a + i] += g[n * (chunk_a + chunk_b) + i];
      }
      if (b.requires_grad()) {
        auto gb = b.ensure_grad();
        for (std::int64_t n = 0; n < batches; ++n)
          for (std::int64_t i = 0; i < chunk_b; ++i)
            gb[n * chunk_b + i] += g[n * (chunk_a + chunk_b) + chunk_a + i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& input) {
  Tensor<T> out = make_output(tape, Shape{1, 1, 1, 1}, {&input});
  T acc = 0;
  for (T v : input.data()) acc += v;
  out.mutable_data()[0] = acc;
  if (out.requires_grad()) {
    tape.record({input}, out, [input, out]() mutable {
      const T g = out.grad()[0];
      for (T& v : input.ensure_grad()) v += g;
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& input, T factor) {
  Tensor<T> out = make_output(tape, input.shape(), {&input});
  const auto x = input.data();
  auto y = out.mutable_data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * factor;
  if (out.requires_grad()) {
    tape.record({input}, out, [input, out, factor]() mutable {
      const auto g = out.grad();
      auto gx = input.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * factor;
    });
  }
  return out;
}

#define IGAF_INSTANTIATE_OPS(T)                                                         \
  template Tensor<T> activation(Tape<T>&, const Tensor<T>&, Activation);                \
  template Tensor<T> global_avg_pool(Tape<T>&, const Tensor<T>&);                       \
  template Tensor<T> add(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                 \
  template Tensor<T> mul(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                 \
  template Tensor<T> dropout(Tape<T>&, const Tensor<T>&, double, bool, Rng&);           \
  template Tensor<T> concat_channels(Tape<T>&, const Tensor<T>&, const Tensor<T>&);     \
  template Tensor<T> sum(Tape<T>&, const Tensor<T>&);                                   \
  template Tensor<T> scale(Tape<T>&, const Tensor<T>&, T);

IGAF_INSTANTIATE_OPS(float)
IGAF_INSTANTIATE_OPS(double)

#undef IGAF_INSTANTIATE_OPS

}  // namespace igaf::ops
