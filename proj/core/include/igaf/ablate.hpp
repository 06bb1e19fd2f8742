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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igaf/config.hpp"
#include "igaf/data.hpp"

namespace igaf {

/// One architecture toggle studied in the ablation tables.
struct AblationVariant {
  std::string name;  // e.g. "use_wf=false"
  std::string label;
  std::optional<double> reference_rmse;  // published NYU v2 x4 value
};

/// The seven supported variant names.
const std::vector<AblationVariant>& ablation_variants();

/// Looks up a variant by name; throws ConfigError for unknown names.
const AblationVariant& find_ablation_variant(std::string_view name);

/// Returns `base` with the variant's toggle applied.
ModelConfig apply_variant(const ModelConfig& base, std::string_view name);

/// Published NYU v2 x4 RMSE of the full model, listed for context only.
inline constexpr double kReferenceFullModelRmse = 1.12;

struct ReferenceScaleRmse {
  int scale;
  double rmse;
};

/// Published NYU v2 RMSE of the full model per upsampling factor.
inline constexpr ReferenceScaleRmse kReferenceNyuRmse[] = {{4, 1.12}, {8, 2.48}, {16, 5.00}};

struct AblationRow {
  std::string name;
  std::string label;
  std::int64_t param_count = 0;
  double final_l1 = 0.0;
  double rmse_model = 0.0;
  double rmse_bicubic = 0.0;
  std::optional<double> reference_rmse;
};

/// Trains the base config plus each variant with identical seed and
/// schedule, then evaluates each on the same manifest. The base row is first.
std::vector<AblationRow> ablate(const TrainConfig& base, const DatasetManifest& manifest,
                                const std::vector<std::string>& variants,
                                const std::filesystem::path& run_dir = {});

/// Fixed-width text table; the reference column is labeled as published
/// full-scale numbers that desk-scale runs do not reproduce.
std::string format_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace igaf
