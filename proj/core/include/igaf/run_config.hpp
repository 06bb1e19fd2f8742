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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "igaf/config.hpp"

namespace igaf {

/// Everything a `train` or `ablate` invocation needs.
struct RunConfig {
  TrainConfig train;
  std::string manifest;
  std::string run_dir;  // empty: derive a unique directory under checkpoint_dir
};

/// Config files are JSON objects with flat dotted keys, e.g.
/// {"model.channels": 16, "train.epochs": 60}. Every key must be one of the
/// keys produced by dump_run_config(RunConfig{}); unknown keys and values of
/// the wrong type raise ConfigError naming the key.
RunConfig parse_run_config(std::string_view json_text,
                           const std::vector<std::string>& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

/// Fully resolved config as flat dotted JSON.
std::string dump_run_config(const RunConfig& cfg);

/// All accepted dotted keys, in dump order.
std::vector<std::string> run_config_keys();

/// Applies a single "key=value" override. The value is parsed as JSON when
/// possible, else taken as a string.
void apply_override(RunConfig& cfg, std::string_view assignment);

}  // namespace igaf
