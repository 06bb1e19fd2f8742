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

#include "igaf/gradcheck_suite.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "igaf/blocks.hpp"
#include "igaf/error.hpp"
#include "igaf/gradcheck.hpp"
#include "igaf/ops.hpp"
#include "igaf/params.hpp"
#include "igaf/rng.hpp"

namespace igaf {
namespace {

constexpr int kSide = 6;

ModelConfig small_config() {
  ModelConfig cfg;
  cfg.channels = 4;
  cfg.ca_reduction = 2;
  cfg.n_fe = 1;
  cfg.num_igaf = 1;
  return cfg;
}

// Uniform in [-0.5, 0.5], pushed away from the origin so kinks stay out of reach.
TensorD random_input(const Shape& shape, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(shape.numel()));
  for (double& x : v) {
    x = rng.uniform(-0.5, 0.5);
    if (std::fabs(x) < 1e-3) x = x < 0.0 ? -1e-3 : 1e-3;
  }
  return TensorD::from_data(shape, std::move(v));
}

// Random Kaiming weights everywhere (including zero-initialized ones, which
// would otherwise hide the paths behind them) and small random biases.
ParamStore<double> make_params(const ParamSpecs& specs, const ModelConfig& cfg, Rng& rng) {
  ParamSpecs dense = specs;
  for (auto& s : dense) s.zero_init = false;
  ParamStore<double> params = init_from_specs<double>(dense, cfg.leaky_slope, rng.next_u64());
  for (const auto& s : dense) {
    if (s.fan_in != 0) continue;
    for (double& b : params.at(s.name).mutable_data()) b = rng.uniform(-0.1, 0.1);
  }
  return params;
}

std::vector<TensorD> with_params(std::vector<TensorD> inputs, ParamStore<double>& params) {
  for (auto& e : params.entries()) inputs.push_back(e.value);
  return inputs;
}

using BlockFn = std::function<TensorD(ForwardContext<double>&, std::span<const TensorD>)>;

// Checks `fn` w.r.t. the block inputs and every parameter in `specs`.
double check_block(const ModelConfig& cfg, const ParamSpecs& specs, std::vector<TensorD> inputs,
                   Rng& rng, const BlockFn& fn) {
  ParamStore<double> params = make_params(specs, cfg, rng);
  const std::size_t n_inputs = inputs.size();
  auto f = [&](TapeD& tape, std::span<const TensorD> all) {
    ForwardContext<double> ctx{tape, params, cfg, false, nullptr};
    return fn(ctx, all.first(n_inputs));
  };
  return grad_check(f, with_params(std::move(inputs), params), kGradCheckEps);
}

struct Entry {
  const char* name;
  std::function<double(Rng&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"conv2d",
       [](Rng& rng) {
         const TensorD w = random_input({3, 2, 3, 3}, rng);
         const TensorD b = random_input({1, 3, 1, 1}, rng);
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) {
               return ops::conv2d(t, in[0], in[1], in[2], 2, 2);
             },
             {random_input({2, 2, 5, 5}, rng), w, b}, kGradCheckEps);
       }},
      {"linear",
       [](Rng& rng) {
         const TensorD w = random_input({3, 4, 1, 1}, rng);
         const TensorD b = random_input({1, 3, 1, 1}, rng);
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) {
               return ops::linear(t, in[0], in[1], in[2]);
             },
             {random_input({2, 4, 1, 1}, rng), w, b}, kGradCheckEps);
       }},
      {"leaky_relu",
       [](Rng& rng) {
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) { return ops::leaky_relu(t, in[0], 0.1); },
             {random_input({1, 2, 4, 4}, rng)}, kGradCheckEps);
       }},
      {"relu",
       [](Rng& rng) {
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) { return ops::relu(t, in[0]); },
             {random_input({1, 2, 4, 4}, rng)}, kGradCheckEps);
       }},
      {"sigmoid",
       [](Rng& rng) {
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) { return ops::sigmoid(t, in[0]); },
             {random_input({1, 2, 4, 4}, rng)}, kGradCheckEps);
       }},
      {"global_avg_pool",
       [](Rng& rng) {
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) { return ops::global_avg_pool(t, in[0]); },
             {random_input({2, 3, 4, 5}, rng)}, kGradCheckEps);
       }},
      {"elementwise",
       [](Rng& rng) {
         return grad_check(
             [](TapeD& t, std::span<const TensorD> in) {
               const TensorD gated = ops::mul(t, in[0], in[2]);
               const TensorD shifted = ops::add(t, in[1], in[3]);
               const TensorD prod = ops::mul(t, gated, shifted);
               return ops::scale(t, ops::concat_channels(t, prod, in[0]), 0.5);
             },
             {random_input({2, 3, 4, 4}, rng), random_input({2, 3, 4, 4}, rng),
              random_input({2, 3, 1, 1}, rng), random_input({2, 3, 4, 4}, rng)},
             kGradCheckEps);
       }},
      {"ca",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_ca_specs(specs, cfg, "b");
         return check_block(cfg, specs, {random_input({1, cfg.channels, kSide, kSide}, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return ca_forward(ctx, "b", in[0]);
                            });
       }},
      {"fe",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_fe_specs(specs, cfg, "b");
         return check_block(cfg, specs, {random_input({1, cfg.channels, kSide, kSide}, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return fe_forward(ctx, "b", in[0]);
                            });
       }},
      {"wf",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_wf_specs(specs, cfg, "b");
         return check_block(cfg, specs, {random_input({1, cfg.channels, kSide, kSide}, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return wf_forward(ctx, "b", in[0]);
                            });
       }},
      {"saf",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_saf_specs(specs, cfg, "b");
         const Shape shape{1, cfg.channels, kSide, kSide};
         return check_block(cfg, specs, {random_input(shape, rng), random_input(shape, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return saf_forward(ctx, "b", in[0], in[1]);
                            });
       }},
      {"igaf",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_igaf_specs(specs, cfg, "b");
         const Shape shape{1, cfg.channels, kSide, kSide};
         return check_block(cfg, specs, {random_input(shape, rng), random_input(shape, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              IgafOutput<double> out = igaf_forward(ctx, "b", in[0], in[1]);
                              return ops::concat_channels(ctx.tape, out.depth, out.rgb);
                            });
       }},
      {"refine",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         ParamSpecs specs;
         append_refine_specs(specs, cfg, "b");
         return check_block(cfg, specs, {random_input({1, cfg.channels, kSide, kSide}, rng)}, rng,
                            [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return depth_refine_forward(ctx, "b", in[0]);
                            });
       }},
      {"model",
       [](Rng& rng) {
         const ModelConfig cfg = small_config();
         return check_block(cfg, model_param_specs(cfg),
                            {random_input({1, 3, kSide, kSide}, rng),
                             random_input({1, 1, kSide, kSide}, rng)},
                            rng, [](ForwardContext<double>& ctx, std::span<const TensorD> in) {
                              return model_forward(ctx, in[0], in[1]);
                            });
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> gradcheck_block_names() {
  std::vector<std::string> names;
  for (const auto& e : entries()) names.emplace_back(e.name);
  return names;
}

std::vector<BlockGradCheck> run_gradcheck_suite(std::string_view block) {
  std::vector<BlockGradCheck> results;
  bool matched = block.empty();
  const auto& table = entries();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Entry& e = table[i];
    if (!block.empty() && block != e.name) continue;
    matched = true;
    // Each block gets its own fixed stream so results do not depend on which
    // other blocks were selected.
    Rng rng(1000 + i);
    BlockGradCheck r;
    r.block = e.name;
    r.max_rel_error = e.run(rng);
    results.push_back(std::move(r));
  }
  if (!matched) {
    std::string known;
    for (const auto& n : gradcheck_block_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown gradcheck block '" + std::string(block) + "' (known: " + known +
                      ")");
  }
  return results;
}

}  // namespace igaf
