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

#include "igaf/optim.hpp"

#include <cmath>

#include "igaf/error.hpp"

namespace igaf {

template <typename T>
Tensor<T> l1_loss(Tape<T>& tape, const Tensor<T>& pred, const Tensor<T>& target) {
  if (pred.shape() != target.shape()) {
    throw ShapeError("l1_loss: shape mismatch " + pred.shape().str() + " vs " +
                     target.shape().str());
  }
  const auto p = pred.data();
  const auto t = target.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(static_cast<double>(p[i]) - t[i]);
  const auto count = static_cast<double>(p.size());
  const bool track = tape.wants({&pred, &target});
  Tensor<T> out = Tensor<T>::full(Shape{1, 1, 1, 1}, static_cast<T>(acc / count), track);
  if (track) {
    tape.record({pred, target}, out, [pred, target, out, count]() mutable {
      const T g = out.grad()[0] / static_cast<T>(count);
      const auto p = pred.data();
      const auto t = target.data();
      auto sign = [](T d) { return d > T(0) ? T(1) : (d < T(0) ? T(-1) : T(0)); };
      if (pred.requires_grad()) {
        auto gp = pred.ensure_grad();
        for (std::size_t i = 0; i < p.size(); ++i) gp[i] += g * sign(p[i] - t[i]);
      }
      if (target.requires_grad()) {
        auto gt = target.ensure_grad();
        for (std::size_t i = 0; i < p.size(); ++i) gt[i] -= g * sign(p[i] - t[i]);
      }
    });
  }
  return out;
}

template <typename T>
double rmse(const Tensor<T>& pred, const Tensor<T>& target) {
  if (pred.shape() != target.shape()) {
    throw ShapeError("rmse: shape mismatch " + pred.shape().str() + " vs " +
                     target.shape().str());
  }
  const auto p = pred.data();
  const auto t = target.data();
  if (p.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(p.size()));
}

template <typename T>
AdamState<T> AdamState<T>::for_params(const ParamStore<T>& params, AdamHyper hyper) {
  AdamState<T> s;
  s.hyper = hyper;
  for (const auto& e : params.entries()) {
    s.m.emplace_back(static_cast<std::size_t>(e.value.numel()), T(0));
    s.v.emplace_back(static_cast<std::size_t>(e.value.numel()), T(0));
  }
  return s;
}

template <typename T>
void adam_step(ParamStore<T>& params, AdamState<T>& state, double lr) {
  auto& entries = params.entries();
  if (state.m.size() != entries.size() || state.v.size() != entries.size()) {
    throw ConfigError("adam state does not match the parameter store");
  }
  for (const auto& e : entries) {
    if (!e.value.has_grad()) throw NumericError("adam_step: parameter '" + e.name + "' has no gradient");
  }
  state.step += 1;
  const auto& h = state.hyper;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    Tensor<T>& p = entries[k].value;
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (m.size() != static_cast<std::size_t>(p.numel())) {
      throw ConfigError("adam moment size mismatch for '" + entries[k].name + "'");
    }
    const auto g = p.grad();
    auto w = p.mutable_data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i];
      const double mi = h.beta1 * m[i] + (1.0 - h.beta1) * gi;
      const double vi = h.beta2 * v[i] + (1.0 - h.beta2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      w[i] = static_cast<T>(w[i] - lr * m_hat / (std::sqrt(v_hat) + h.eps));
    }
    p.clear_grad();
  }
}

float lr_at(const Schedule& schedule, int epoch) {
  if (epoch < 0 || epoch >= schedule.total_epochs) {
    throw ConfigError("lr_at: epoch " + std::to_string(epoch) + " outside [0, " +
                      std::to_string(schedule.total_epochs) + ")");
  }
  int passed = 0;
  for (int m : schedule.milestones) {
    if (m <= epoch) ++passed;
  }
  double lr = schedule.base_lr;
  for (int i = 0; i < passed; ++i) lr *= schedule.gamma;
  return static_cast<float>(lr);
}

template Tensor<float> l1_loss(Tape<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> l1_loss(Tape<double>&, const Tensor<double>&, const Tensor<double>&);
template double rmse(const Tensor<float>&, const Tensor<float>&);
template double rmse(const Tensor<double>&, const Tensor<double>&);
template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(ParamStore<float>&, AdamState<float>&, double);
template void adam_step(ParamStore<double>&, AdamState<double>&, double);

}  // namespace igaf
