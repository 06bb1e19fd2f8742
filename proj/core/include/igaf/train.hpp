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
#include <vector>

#include "igaf/checkpoint.hpp"
#include "igaf/config.hpp"
#include "igaf/data.hpp"

namespace igaf {

struct EpochLog {
  int epoch = 0;
  double mean_l1 = 0.0;
  float lr = 0.0f;
};

struct TrainResult {
  Checkpoint final;
  std::vector<EpochLog> log;
  std::filesystem::path loss_log_path;
  std::filesystem::path final_checkpoint_path;
};

struct TrainOptions {
  /// Where loss_log.csv and checkpoints go; empty keeps everything in memory.
  std::filesystem::path run_dir;
  /// Continue from this checkpoint instead of a fresh initialization.
  std::filesystem::path resume_from;
  bool verbose = false;
};

/// Seeded, single-threaded training loop: per epoch, shuffle, then for each
/// batch crop, predict, L1 loss, backward and an Adam step at lr_at(epoch).
/// Throws DataError naming the sample id on load failures and NumericError
/// naming the step on a non-finite loss.
TrainResult train(const TrainConfig& cfg, const DatasetManifest& manifest,
                  const TrainOptions& options = {});

/// Writes `epoch,mean_l1,lr` CSV.
void write_loss_log(const std::filesystem::path& path, const std::vector<EpochLog>& log);

struct EvalRow {
  std::string id;
  double rmse_model = 0.0;
  double rmse_bicubic = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_rmse_model = 0.0;
  double mean_rmse_bicubic = 0.0;
};

/// Whole-image evaluation in denormalized depth units, with the bicubic
/// baseline alongside. Throws ConfigError if scale differs from cfg.scale.
EvalReport evaluate(const ParamStore<float>& params, const ModelConfig& cfg,
                    const DatasetManifest& manifest, int scale);
EvalReport evaluate(const Checkpoint& ckpt, const DatasetManifest& manifest, int scale);

/// Writes `id,rmse_model,rmse_bicubic` CSV.
std::string eval_report_csv(const EvalReport& report);

}  // namespace igaf
