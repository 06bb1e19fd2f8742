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
#include <vector>

#include "igaf/image_io.hpp"
#include "igaf/rng.hpp"
#include "igaf/tensor.hpp"

namespace igaf {

/// Min/max of the raw depth raster, used to map normalized depth back.
struct DepthAnchors {
  float min = 0.0f;
  float max = 1.0f;
};

/// One RGB-guided depth example. Depths are normalized to [0, 1].
struct Sample {
  TensorF rgb;       // [1, 3, sH, sW] in [0, 1]
  TensorF lr_depth;  // [1, 1, H, W]
  TensorF hr_depth;  // [1, 1, sH, sW]
  DepthAnchors anchors;
  std::string id;
};

struct ManifestEntry {
  std::string id;
  std::filesystem::path rgb;
  std::filesystem::path depth;
  std::optional<std::filesystem::path> lr_depth;
};

/// Dataset listing. Entry paths are resolved against `root`.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  std::string split = "train";
  int scale = 4;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Reads `<id>\t<rgb>\t<depth>[\t<lr_depth>]` lines. Lines starting with '#'
/// are comments; `# split=...` and `# scale=...` set metadata. Entries are
/// sorted by id and every referenced file must exist.
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Loads and normalizes one pair. The LR depth is simulated by bicubic
/// downsampling unless the entry names a real LR file, which is normalized
/// with the HR anchors.
Sample load_sample(const DatasetManifest& manifest, const ManifestEntry& entry,
                   int scale);

/// Loads an RGB guide and a real LR depth map for inference. The LR depth is
/// normalized with its own min/max, which become the sample anchors; the HR
/// depth is left undefined. The LR size need not divide the RGB size;
/// upsample_depth() resamples it straight to the guide resolution.
Sample load_inference_pair(const std::filesystem::path& rgb_path,
                           const std::filesystem::path& lr_depth_path);

/// Rounds a depth raster (already in raw units) to 16 bits, clamping to the
/// representable range.
Image16 depth_to_image16(const TensorF& depth);

/// Bicubic downsampling by an integer factor.
TensorF simulate_lr(const TensorF& hr_depth, int scale);

/// Crops an aligned patch; HR offsets are multiples of `scale`.
Sample random_crop(const Sample& sample, int patch, int scale, Rng& rng);

/// Affine inverse of the min-max normalization.
TensorF denormalize(const TensorF& depth, const DepthAnchors& anchors);

/// Bicubic upsampling of the LR depth to the RGB resolution.
TensorF upsample_depth(const Sample& sample);

/// Stacks [1, C, H, W] tensors along the batch axis.
TensorF stack_batch(const std::vector<TensorF>& items);

/// Generates `count` synthetic scenes under out_dir and writes manifest.txt.
DatasetManifest synth_dataset(int count, int size, std::uint64_t seed,
                              const std::filesystem::path& out_dir, int scale = 4);

}  // namespace igaf
