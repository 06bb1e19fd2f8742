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

#include "igaf/blocks.hpp"

#include "igaf/error.hpp"
#include "igaf/ops.hpp"

namespace igaf {
namespace {

std::string join(const std::string& prefix, const std::string& leaf) {
  return prefix.empty() ? leaf : prefix + "." + leaf;
}

std::string indexed(const std::string& prefix, const char* group, int i) {
  return join(prefix, std::string(group) + "." + std::to_string(i));
}

constexpr int kRefineFeCount = 3;

}  // namespace

// ---------------------------------------------------------------------------
// Parameter declarations

void append_conv_specs(ParamSpecs& out, const std::string& prefix, int cin, int cout,
                       int kernel, bool zero_init) {
  out.push_back({join(prefix, "weight"), Shape{cout, cin, kernel, kernel},
                 static_cast<std::int64_t>(cin) * kernel * kernel, zero_init});
  out.push_back({join(prefix, "bias"), channel_shape(cout), 0});
}

void append_linear_specs(ParamSpecs& out, const std::string& prefix, int cin, int cout) {
  append_conv_specs(out, prefix, cin, cout, 1);
}

void append_ca_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  const int squeezed = cfg.channels / cfg.ca_reduction;
  append_conv_specs(out, join(prefix, "conv1"), cfg.channels, squeezed, 1);
  append_conv_specs(out, join(prefix, "conv2"), squeezed, cfg.channels, 1);
}

void append_fe_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  const int c = cfg.channels;
  append_conv_specs(out, join(prefix, "conv1"), c, c, 3);
  append_conv_specs(out, join(prefix, "conv2"), c, c, 3);
  append_ca_specs(out, cfg, join(prefix, "ca"));
  // Residual branches start closed; otherwise the multiplicative fusion
  // compounds their growth across modules.
  append_conv_specs(out, join(prefix, "conv3"), c, c, 3, true);
}

void append_wf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  const int c = cfg.channels;
  for (std::size_t i = 0; i < cfg.wf_dilations.size(); ++i) {
    append_conv_specs(out, indexed(prefix, "branch", static_cast<int>(i)), c, c, 3);
  }
  append_conv_specs(out, join(prefix, "fuse"), c, c, 3);
}

void append_fwf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  for (int i = 0; i < cfg.n_fe; ++i) append_fe_specs(out, cfg, indexed(prefix, "fe", i));
  if (cfg.use_wf) append_wf_specs(out, cfg, join(prefix, "wf"));
}

void append_saf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  if (!cfg.saf_weighted) return;
  for (const char* side : {"mlp_a", "mlp_b"}) {
    for (int layer = 0; layer < cfg.saf_mlp_layers; ++layer) {
      append_linear_specs(out, indexed(prefix, side, layer), cfg.channels, cfg.channels);
    }
  }
}

void append_igaf_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  append_fwf_specs(out, cfg, join(prefix, "rgb_fwf"));
  append_fwf_specs(out, cfg, join(prefix, "depth_fwf"));
  switch (cfg.fusion_kind) {
    case FusionKind::igaf:
      append_saf_specs(out, cfg, join(prefix, "saf1"));
      append_conv_specs(out, join(prefix, "joint_conv"), cfg.channels, cfg.channels, 3);
      append_saf_specs(out, cfg, join(prefix, "saf2"));
      break;
    case FusionKind::concat:
      append_conv_specs(out, join(prefix, "concat_proj"), 2 * cfg.channels, cfg.channels, 1);
      break;
    case FusionKind::add:
      break;
  }
}

void append_refine_specs(ParamSpecs& out, const ModelConfig& cfg, const std::string& prefix) {
  for (int i = 0; i < kRefineFeCount; ++i) append_fe_specs(out, cfg, indexed(prefix, "fe", i));
  append_conv_specs(out, join(prefix, "conv1"), cfg.channels, cfg.channels, 3);
  append_conv_specs(out, join(prefix, "conv2"), cfg.channels, 1, 3);
}

ParamSpecs model_param_specs(const ModelConfig& cfg) {
  cfg.validate();
  ParamSpecs out;
  append_conv_specs(out, "stem_rgb", 3, cfg.channels, 3);
  append_conv_specs(out, "stem_depth", 1, cfg.channels, 3);
  for (int i = 0; i < cfg.num_igaf; ++i) append_igaf_specs(out, cfg, indexed("", "igaf", i));
  append_refine_specs(out, cfg, "refine");
  return out;
}

std::int64_t model_param_count(const ModelConfig& cfg) {
  return count_scalars(model_param_specs(cfg));
}

template <typename T>
ParamStore<T> init_params(const ModelConfig& cfg, std::uint64_t seed) {
  return init_from_specs<T>(model_param_specs(cfg), cfg.leaky_slope, seed);
}

// ---------------------------------------------------------------------------
// Forward passes

template <typename T>
Tensor<T> conv_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& x,
                       int dilation) {
  const Tensor<T>& w = ctx.params.at(join(prefix, "weight"));
  const Tensor<T>& b = ctx.params.at(join(prefix, "bias"));
  const int k = static_cast<int>(w.shape().h);
  return ops::conv2d(ctx.tape, x, w, b, dilation * (k - 1) / 2, dilation);
}

namespace {

template <typename T>
Tensor<T> lrelu(ForwardContext<T>& ctx, const Tensor<T>& x) {
  return ops::leaky_relu(ctx.tape, x, ctx.config.leaky_slope);
}

template <typename T>
Tensor<T> drop(ForwardContext<T>& ctx, const Tensor<T>& x) {
  const double p = ctx.config.dropout_p;
  if (!ctx.training || p == 0.0) return x;
  if (ctx.rng == nullptr) throw ConfigError("training forward pass needs a dropout RNG");
  return ops::dropout(ctx.tape, x, p, true, *ctx.rng);
}

template <typename T>
Tensor<T> saf_mlp(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& x) {
  Tensor<T> y = x;
  for (int layer = 0; layer < ctx.config.saf_mlp_layers; ++layer) {
    const std::string p = prefix + "." + std::to_string(layer);
    y = ops::linear(ctx.tape, y, ctx.params.at(p + ".weight"), ctx.params.at(p + ".bias"));
  }
  return y;
}

void check_same(const Shape& a, const Shape& b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": shape mismatch " + a.str() + " vs " + b.str());
}

}  // namespace

template <typename T>
Tensor<T> ca_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& k) {
  if (k.shape().c != ctx.config.channels) {
    throw ShapeError("ca: expected " + std::to_string(ctx.config.channels) + " channels, got " +
                     k.shape().str());
  }
  if (ctx.config.channels % ctx.config.ca_reduction != 0) {
    throw ConfigError("ca: channels not divisible by ca_reduction");
  }
  Tensor<T> gate = ops::global_avg_pool(ctx.tape, k);
  gate = conv_forward(ctx, join(prefix, "conv1"), gate);
  gate = ops::relu(ctx.tape, gate);
  gate = conv_forward(ctx, join(prefix, "conv2"), gate);
  gate = ops::sigmoid(ctx.tape, gate);
  return ops::mul(ctx.tape, k, gate);
}

template <typename T>
Tensor<T> fe_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& m) {
  Tensor<T> h = conv_forward(ctx, join(prefix, "conv1"), m);
  h = lrelu(ctx, h);
  h = conv_forward(ctx, join(prefix, "conv2"), h);
  h = ca_forward(ctx, join(prefix, "ca"), h);
  h = ops::add(ctx.tape, m, h);
  h = conv_forward(ctx, join(prefix, "conv3"), h);
  return ops::add(ctx.tape, m, h);
}

template <typename T>
Tensor<T> wf_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& x) {
  const auto& dilations = ctx.config.wf_dilations;
  Tensor<T> acc;
  for (std::size_t i = 0; i < dilations.size(); ++i) {
    Tensor<T> b = conv_forward(ctx, indexed(prefix, "branch", static_cast<int>(i)), x,
                               dilations[i]);
    b = drop(ctx, lrelu(ctx, b));
    acc = acc.defined() ? ops::add(ctx.tape, acc, b) : b;
  }
  Tensor<T> y = conv_forward(ctx, join(prefix, "fuse"), acc);
  return drop(ctx, lrelu(ctx, y));
}

template <typename T>
FwfOutput<T> fwf_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& x) {
  Tensor<T> shallow = x;
  for (int i = 0; i < ctx.config.n_fe; ++i) {
    shallow = fe_forward(ctx, indexed(prefix, "fe", i), shallow);
  }
  Tensor<T> deep = shallow;
  if (ctx.config.use_wf) {
    deep = ops::add(ctx.tape, shallow, wf_forward(ctx, join(prefix, "wf"), shallow));
  }
  if (ctx.config.skip_location == SkipLocation::after_wf) return {deep, deep};
  return {deep, shallow};
}

template <typename T>
Tensor<T> saf_forward(ForwardContext<T>& ctx, const std::string& prefix, const Tensor<T>& x_a,
                      const Tensor<T>& x_b) {
  check_same(x_a.shape(), x_b.shape(), "saf");
  if (!ctx.config.saf_weighted) return ops::add(ctx.tape, x_a, x_b);
  const Tensor<T> y_a = saf_mlp(ctx, join(prefix, "mlp_a"), x_a);
  const Tensor<T> y_b = saf_mlp(ctx, join(prefix, "mlp_b"), x_b);
  const Tensor<T> lhs = ops::mul(ctx.tape, x_a, ops::sigmoid(ctx.tape, y_b));
  const Tensor<T> rhs = ops::mul(ctx.tape, x_b, ops::sigmoid(ctx.tape, y_a));
  return ops::add(ctx.tape, lhs, rhs);
}

template <typename T>
IgafOutput<T> igaf_forward(ForwardContext<T>& ctx, const std::string& prefix,
                           const Tensor<T>& rgb, const Tensor<T>& depth) {
  check_same(rgb.shape(), depth.shape(), "igaf");
  const FwfOutput<T> r = fwf_forward(ctx, join(prefix, "rgb_fwf"), rgb);
  const FwfOutput<T> d = fwf_forward(ctx, join(prefix, "depth_fwf"), depth);
  Tensor<T> fused;
  switch (ctx.config.fusion_kind) {
    case FusionKind::igaf: {
      const Tensor<T> naive = ops::mul(ctx.tape, r.deep, d.deep);
      const Tensor<T> guidance = saf_forward(ctx, join(prefix, "saf1"), naive, r.deep);
      const Tensor<T> joint = conv_forward(ctx, join(prefix, "joint_conv"), guidance);
      fused = saf_forward(ctx, join(prefix, "saf2"), joint, d.deep);
      break;
    }
    case FusionKind::add:
      fused = ops::add(ctx.tape, r.deep, d.deep);
      break;
    case FusionKind::concat:
      fused = conv_forward(ctx, join(prefix, "concat_proj"),
                           ops::concat_channels(ctx.tape, r.deep, d.deep));
      break;
  }
  return {fused, r.shallow};
}

template <typename T>
Tensor<T> depth_refine_forward(ForwardContext<T>& ctx, const std::string& prefix,
                               const Tensor<T>& x) {
  Tensor<T> h = x;
  for (int i = 0; i < kRefineFeCount; ++i) h = fe_forward(ctx, indexed(prefix, "fe", i), h);
  h = conv_forward(ctx, join(prefix, "conv1"), h);
  h = lrelu(ctx, h);
  return conv_forward(ctx, join(prefix, "conv2"), h);
}

template <typename T>
Tensor<T> model_forward(ForwardContext<T>& ctx, const Tensor<T>& rgb,
                        const Tensor<T>& upsampled_depth) {
  const Shape g = rgb.shape();
  const Shape l = upsampled_depth.shape();
  if (g.c != 3) throw ShapeError("model: rgb must have 3 channels, got " + g.str());
  if (l.c != 1) throw ShapeError("model: depth must have 1 channel, got " + l.str());
  if (g.n != l.n || g.h != l.h || g.w != l.w) {
    throw ShapeError("model: rgb " + g.str() + " and upsampled depth " + l.str() +
                     " are not spatially aligned");
  }
  Tensor<T> r = lrelu(ctx, conv_forward(ctx, "stem_rgb", rgb));
  Tensor<T> d = lrelu(ctx, conv_forward(ctx, "stem_depth", upsampled_depth));
  for (int i = 0; i < ctx.config.num_igaf; ++i) {
    IgafOutput<T> out = igaf_forward(ctx, indexed("", "igaf", i), r, d);
    d = out.depth;
    r = out.rgb;
  }
  const Tensor<T> residual = depth_refine_forward(ctx, "refine", d);
  return ops::add(ctx.tape, upsampled_depth, residual);
}

template <typename T>
Tensor<T> predict(const ParamStore<T>& params, const ModelConfig& cfg, const Tensor<T>& rgb,
                  const Tensor<T>& upsampled_depth) {
  Tape<T> tape(false);
  ForwardContext<T> ctx{tape, params, cfg, false, nullptr};
  return model_forward(ctx, rgb, upsampled_depth);
}

#define IGAF_INSTANTIATE_BLOCKS(T)                                                            \
  template ParamStore<T> init_params(const ModelConfig&, std::uint64_t);                      \
  template Tensor<T> conv_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&,   \
                                  int);                                                       \
  template Tensor<T> ca_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&);    \
  template Tensor<T> fe_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&);    \
  template Tensor<T> wf_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&);    \
  template FwfOutput<T> fwf_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&); \
  template Tensor<T> saf_forward(ForwardContext<T>&, const std::string&, const Tensor<T>&,    \
                                 const Tensor<T>&);                                           \
  template IgafOutput<T> igaf_forward(ForwardContext<T>&, const std::string&,                 \
                                      const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> depth_refine_forward(ForwardContext<T>&, const std::string&,             \
                                          const Tensor<T>&);                                  \
  template Tensor<T> model_forward(ForwardContext<T>&, const Tensor<T>&, const Tensor<T>&);   \
  template Tensor<T> predict(const ParamStore<T>&, const ModelConfig&, const Tensor<T>&,      \
                             const Tensor<T>&);

IGAF_INSTANTIATE_BLOCKS(float)
IGAF_INSTANTIATE_BLOCKS(double)

#undef IGAF_INSTANTIATE_BLOCKS

}  // namespace igaf
