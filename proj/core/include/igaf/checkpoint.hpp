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
#include <filesystem>
#include <optional>
#include <string>

#include "igaf/config.hpp"
#include "igaf/optim.hpp"
#include "igaf/params.hpp"

namespace igaf {

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMeta {
  TrainConfig train;  // includes the model config and schedule
  int epoch = 0;      // epochs completed
  std::string data_rng_state;
  std::string dropout_rng_state;
};

struct Checkpoint {
  ParamStore<float> params;
  AdamState<float> adam;
  CheckpointMeta meta;
};

/// Writes checkpoint.json plus raw little-endian f32 blobs (params.bin,
/// adam_m.bin, adam_v.bin) into `dir`, creating it if needed.
void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);

/// Reads a checkpoint. Every tensor the stored model config declares must be
/// present with the declared shape; extra tensors are rejected. When
/// `expected` is given, the stored model config must equal it.
Checkpoint load_checkpoint(const std::filesystem::path& dir,
                           const std::optional<ModelConfig>& expected = std::nullopt);

}  // namespace igaf
