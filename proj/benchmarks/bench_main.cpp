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

#include <benchmark/benchmark.h>

#include "igaf/blocks.hpp"
#include "igaf/ops.hpp"
#include "igaf/optim.hpp"
#include "igaf/resize.hpp"

namespace igaf {
namespace {

TensorF filled(const Shape& shape, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> v(static_cast<std::size_t>(shape.numel()));
  for (float& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return TensorF::from_data(shape, std::move(v));
}

void BM_Conv3x3(benchmark::State& state) {
  const auto c = state.range(0);
  const auto side = state.range(1);
  const int dil = static_cast<int>(state.range(2));
  const TensorF x = filled({1, c, side, side}, 1);
  const TensorF w = filled({c, c, 3, 3}, 2);
  const TensorF b = filled({1, c, 1, 1}, 3);
  TapeF tape(false);
  for (auto _ : state) benchmark::DoNotOptimize(ops::conv2d(tape, x, w, b, dil, dil));
  state.SetItemsProcessed(state.iterations() * c * c * 9 * side * side);
}
BENCHMARK(BM_Conv3x3)->Args({32, 64, 1})->Args({32, 64, 3})->Args({32, 128, 1});

void BM_Bicubic(benchmark::State& state) {
  const auto side = state.range(0);
  const TensorF x = filled({1, 1, side, side}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(bicubic_resize(x, side * 4, side * 4));
}
BENCHMARK(BM_Bicubic)->Arg(32)->Arg(64);

void BM_ModelForward(benchmark::State& state) {
  ModelConfig cfg;
  cfg.channels = static_cast<int>(state.range(0));
  const auto side = state.range(1);
  const ParamStore<float> params = init_params<float>(cfg, 0);
  const TensorF rgb = filled({1, 3, side, side}, 5);
  const TensorF depth = filled({1, 1, side, side}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(predict(params, cfg, rgb, depth));
}
BENCHMARK(BM_ModelForward)->Args({16, 64})->Args({32, 64})->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  ModelConfig cfg;
  cfg.channels = static_cast<int>(state.range(0));
  const auto side = state.range(1);
  ParamStore<float> params = init_params<float>(cfg, 0);
  AdamState<float> adam = AdamState<float>::for_params(params);
  const TensorF rgb = filled({1, 3, side, side}, 7);
  const TensorF depth = filled({1, 1, side, side}, 8);
  const TensorF target = filled({1, 1, side, side}, 9);
  Rng rng(10);
  for (auto _ : state) {
    params.zero_grad();
    TapeF tape;
    ForwardContext<float> ctx{tape, params, cfg, true, &rng};
    const TensorF loss = l1_loss(tape, model_forward(ctx, rgb, depth), target);
    tape.backward(loss);
    adam_step(params, adam, 1e-4);
  }
}
BENCHMARK(BM_TrainStep)->Args({16, 64})->Args({32, 64})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace igaf

BENCHMARK_MAIN();
