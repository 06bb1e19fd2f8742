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

#include "igaf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "igaf/error.hpp"
#include "igaf/ops.hpp"
#include "igaf/rng.hpp"

namespace igaf {
namespace {

// Scalar objective: sum(f(x) * projection), without recording.
double evaluate(const GradCheckFn& f, std::span<const TensorD> inputs,
                TensorD& projection, std::uint64_t seed) {
  TapeD tape(false);
  const TensorD out = f(tape, inputs);
  if (!projection.defined()) {
    Rng rng(seed);
    std::vector<double> w(static_cast<std::size_t>(out.numel()));
    for (double& v : w) v = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    projection = TensorD::from_data(out.shape(), std::move(w));
  }
  if (out.shape() != projection.shape()) {
    throw NumericError("grad_check: output shape changed between evaluations");
  }
  double acc = 0.0;
  const auto y = out.data();
  const auto p = projection.data();
  for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] * p[i];
  return acc;
}

}  // namespace

double grad_check(const GradCheckFn& f, std::vector<TensorD> inputs, double eps,
                  std::uint64_t projection_seed) {
  TensorD projection;
  const double base = evaluate(f, inputs, projection, projection_seed);
  const double again = evaluate(f, inputs, projection, projection_seed);
  if (std::memcmp(&base, &again, sizeof(double)) != 0) {
    throw NumericError("grad_check: function is not deterministic");
  }

  std::vector<bool> previous_flags;
  for (auto& in : inputs) {
    previous_flags.push_back(in.requires_grad());
    in.set_requires_grad(true);
    in.zero_grad();
  }
  {
    TapeD tape;
    const TensorD out = f(tape, inputs);
    const TensorD weighted = ops::mul(tape, out, projection);
    tape.backward(ops::sum(tape, weighted));
  }

  double worst = 0.0;
  for (auto& in : inputs) {
    const std::vector<double> analytic(in.grad().begin(), in.grad().end());
    auto values = in.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double plus = evaluate(f, inputs, projection, projection_seed);
      values[i] = saved - eps;
      const double minus = evaluate(f, inputs, projection, projection_seed);
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double denom = std::max({1.0, std::fabs(analytic[i]), std::fabs(numeric)});
      worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
    }
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    inputs[k].clear_grad();
    inputs[k].set_requires_grad(previous_flags[k]);
  }
  return worst;
}

}  // namespace igaf
