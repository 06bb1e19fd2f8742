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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace igaf {

enum class SkipLocation { after_fe, after_wf };
enum class FusionKind { igaf, add, concat };

std::string_view to_string(SkipLocation v);
std::string_view to_string(FusionKind v);
SkipLocation parse_skip_location(std::string_view s);
FusionKind parse_fusion_kind(std::string_view s);

/// Architectural hyperparameters, including the ablation toggles.
struct ModelConfig {
  int channels = 32;
  int n_fe = 2;  // FE modules stacked before the single WF block
  int num_igaf = 3;
  int scale = 4;
  std::vector<int> wf_dilations = {1, 2, 3};
  int ca_reduction = 4;
  int saf_mlp_layers = 2;
  bool saf_weighted = true;
  bool use_wf = true;
  SkipLocation skip_location = SkipLocation::after_fe;
  FusionKind fusion_kind = FusionKind::igaf;
  double leaky_slope = 0.1;
  double dropout_p = 0.1;

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

/// Multi-step learning-rate schedule.
struct Schedule {
  float base_lr = 0.00025f;
  std::vector<int> milestones = {25, 50, 75, 100, 125, 150};
  float gamma = 0.5f;
  int total_epochs = 200;

  void validate() const;
  bool operator==(const Schedule&) const = default;
};

struct TrainConfig {
  ModelConfig model;
  Schedule schedule;
  int batch_size = 1;
  int patch = 256;
  int epochs = 200;
  std::uint64_t seed = 0;
  int eval_every = 0;  // 0 disables periodic checkpoints
  std::string checkpoint_dir = "runs";

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

}  // namespace igaf
