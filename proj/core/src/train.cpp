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

#include "igaf/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include "igaf/blocks.hpp"
#include "igaf/error.hpp"
#include "igaf/optim.hpp"

namespace igaf {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kDataStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kDropoutStream = 0xD1B54A32D192ED03ULL;

std::string epoch_dir_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%04d", epoch);
  return buf;
}

// Fisher-Yates over raw generator draws, independent of std::shuffle.
void shuffle(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

void write_loss_log(const fs::path& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write loss log " + path.string());
  out << "epoch,mean_l1,lr\n";
  char line[96];
  for (const auto& e : log) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g\n", e.epoch, e.mean_l1,
                  static_cast<double>(e.lr));
    out << line;
  }
  if (!out) throw DataError("failed writing loss log " + path.string());
}

TrainResult train(const TrainConfig& cfg, const DatasetManifest& manifest,
                  const TrainOptions& options) {
  cfg.validate();
  if (manifest.entries.empty()) throw DataError("train: manifest has no entries");

  std::vector<Sample> samples;
  samples.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    samples.push_back(load_sample(manifest, entry, cfg.model.scale));
    const Shape s = samples.back().hr_depth.shape();
    if (s.h < cfg.patch || s.w < cfg.patch) {
      throw ConfigError("train: patch " + std::to_string(cfg.patch) + " exceeds sample '" +
                        entry.id + "' of size " + s.str());
    }
  }

  TrainResult result;
  Checkpoint& state = result.final;
  Rng data_rng(cfg.seed ^ kDataStream);
  Rng dropout_rng(cfg.seed ^ kDropoutStream);
  int start_epoch = 0;
  if (!options.resume_from.empty()) {
    state = load_checkpoint(options.resume_from, cfg.model);
    if (!(state.meta.train.schedule == cfg.schedule) || state.meta.train.seed != cfg.seed) {
      throw ConfigError("train: resume checkpoint was produced with a different schedule or seed");
    }
    start_epoch = state.meta.epoch;
    data_rng.set_state(state.meta.data_rng_state);
    dropout_rng.set_state(state.meta.dropout_rng_state);
  } else {
    state.params = init_params<float>(cfg.model, cfg.seed);
    state.adam = AdamState<float>::for_params(state.params);
  }
  state.meta.train = cfg;

  const bool persist = !options.run_dir.empty();
  if (persist) {
    std::error_code ec;
    fs::create_directories(options.run_dir, ec);
    if (ec) throw DataError("cannot create run directory " + options.run_dir.string());
    result.loss_log_path = options.run_dir / "loss_log.csv";
    result.final_checkpoint_path = options.run_dir / "final";
  }

  auto snapshot = [&](int epochs_done) {
    state.meta.epoch = epochs_done;
    state.meta.data_rng_state = data_rng.state();
    state.meta.dropout_rng_state = dropout_rng.state();
  };

  std::vector<std::size_t> order(samples.size());
  std::int64_t step = 0;
  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    const float lr = lr_at(cfg.schedule, epoch);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, data_rng);

    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
      const std::size_t last = std::min(order.size(), first + cfg.batch_size);
      std::vector<TensorF> rgb, depth_up, target;
      for (std::size_t i = first; i < last; ++i) {
        const Sample patch = random_crop(samples[order[i]], cfg.patch, cfg.model.scale, data_rng);
        rgb.push_back(patch.rgb);
        depth_up.push_back(upsample_depth(patch));
        target.push_back(patch.hr_depth);
      }

      state.params.zero_grad();
      TapeF tape;
      ForwardContext<float> ctx{tape, state.params, cfg.model, true, &dropout_rng};
      const TensorF pred = model_forward(ctx, stack_batch(rgb), stack_batch(depth_up));
      const TensorF loss = l1_loss(tape, pred, stack_batch(target));
      const float value = loss.item();
      if (!std::isfinite(value)) {
        throw NumericError("non-finite loss " + std::to_string(value) + " at step " +
                           std::to_string(step) + " (epoch " + std::to_string(epoch) + ")");
      }
      tape.backward(loss);
      adam_step(state.params, state.adam, lr);
      loss_sum += value;
      ++batches;
      ++step;
    }

    result.log.push_back({epoch, loss_sum / batches, lr});
    if (options.verbose) {
      std::cerr << "epoch " << epoch << " mean_l1 " << result.log.back().mean_l1 << " lr " << lr
                << '\n';
    }
    if (persist) {
      write_loss_log(result.loss_log_path, result.log);
      if (cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0) {
        snapshot(epoch + 1);
        save_checkpoint(options.run_dir / epoch_dir_name(epoch + 1), state);
      }
    }
  }

  snapshot(std::max(cfg.epochs, start_epoch));
  if (persist) {
    write_loss_log(result.loss_log_path, result.log);
    save_checkpoint(result.final_checkpoint_path, state);
  }
  return result;
}

}  // namespace igaf
