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

#include <string>
#include <utility>

#include "igaf/config.hpp"
#include "igaf/params.hpp"
#include "igaf/rng.hpp"
#include "igaf/tape.hpp"
#include "igaf/tensor.hpp"

namespace igaf {

/// Per-pass state shared by all blocks. Dropout draws from `rng` only when
/// `training` is set; eval passes may leave it null.
template <typename T>
struct ForwardContext {
  Tape<T>& tape;
  const ParamStore<T>& params;
  const ModelConfig& config;
  bool training = false;
  Rng* rng = nullptr;
};

// Parameter declarations. Each appends the tensors a block owns under
// `prefix`; the forward functions below look them up by the same names.
void append_conv_specs(ParamSpecs& out, const std::string& prefix, int cin,
                       int cout, int kernel, bool zero_init = false);
void append_linear_specs(ParamSpecs& out, const std::string& prefix, int cin,
                         int cout);
void append_ca_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_fe_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_wf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_fwf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_saf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_igaf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);
void append_refine_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix);

/// Every parameter of the full model, in registration order.
ParamSpecs model_param_specs(const ModelConfig& cfg);

/// Parameter count as a pure function of the config.
std::int64_t model_param_count(const ModelConfig& cfg);

template <typename T>
ParamStore<T> init_params(const ModelConfig& cfg, std::uint64_t seed);

/// 3x3 same-padding conv followed by nothing; `prefix` owns weight and bias.
template <typename T>
Tensor<T> conv_forward(ForwardContext<T>& ctx, const std::string& prefix,
                       const Tensor<T>& x, int dilation = 1);

/// Channel attention: K * sigmoid(conv2(relu(conv1(avgpool(K))))).
template <typename T>
Tensor<T> ca_forward(ForwardContext<T>& ctx, const std::string& prefix,
                     const Tensor<T>& k);

/// Feature extractor: M + conv3(M + CA(conv2(lrelu(conv1(M))))).
template <typename T>
Tensor<T> fe_forward(ForwardContext<T>& ctx, const std::string& prefix,
                     const Tensor<T>& m);

/// Wide-focus block: dilated branches (conv, lrelu, dropout) summed, then
/// conv, lrelu, dropout.
template <typename T>
Tensor<T> wf_forward(ForwardContext<T>& ctx, const std::string& prefix,
                     const Tensor<T>& x);

template <typename T>
struct FwfOutput {
  Tensor<T> deep;
  Tensor<T> shallow;
};

/// n_fe stacked FE modules, then an optional residual WF block.
template <typename T>
FwfOutput<T> fwf_forward(ForwardContext<T>& ctx, const std::string& prefix,
                         const Tensor<T>& x);

/// Cross-wise gated fusion: x_a * sigmoid(mlp_b(x_b)) + x_b * sigmoid(mlp_a(x_a)).
template <typename T>
Tensor<T> saf_forward(ForwardContext<T>& ctx, const std::string& prefix,
                      const Tensor<T>& x_a, const Tensor<T>& x_b);

template <typename T>
struct IgafOutput {
  Tensor<T> depth;
  Tensor<T> rgb;
};

template <typename T>
IgafOutput<T> igaf_forward(ForwardContext<T>& ctx, const std::string& prefix,
                           const Tensor<T>& rgb, const Tensor<T>& depth);

/// Three FE modules, then conv, lrelu, conv down to one channel.
template <typename T>
Tensor<T> depth_refine_forward(ForwardContext<T>& ctx, const std::string& prefix,
                               const Tensor<T>& x);

/// Predicted HR depth: upsampled_depth + refine(IGAF chain(stems)).
/// rgb is [N,3,H,W] and upsampled_depth is [N,1,H,W].
template <typename T>
Tensor<T> model_forward(ForwardContext<T>& ctx, const Tensor<T>& rgb,
                        const Tensor<T>& upsampled_depth);

/// Convenience eval-mode prediction without gradient recording.
template <typename T>
Tensor<T> predict(const ParamStore<T>& params, const ModelConfig& cfg,
                  const Tensor<T>& rgb, const Tensor<T>& upsampled_depth);

}  // namespace igaf
