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

#include <cstdio>

#include "igaf/blocks.hpp"
#include "igaf/error.hpp"
#include "igaf/optim.hpp"
#include "igaf/train.hpp"

namespace igaf {

EvalReport evaluate(const ParamStore<float>& params, const ModelConfig& cfg,
                    const DatasetManifest& manifest, int scale) {
  if (scale != cfg.scale) {
    throw ConfigError("evaluate: scale " + std::to_string(scale) +
                      " does not match the model's scale " + std::to_string(cfg.scale));
  }
  EvalReport report;
  for (const auto& entry : manifest.entries) {
    const Sample s = load_sample(manifest, entry, scale);
    const TensorF depth_up = upsample_depth(s);
    const TensorF pred = predict(params, cfg, s.rgb, depth_up);
    const TensorF truth = denormalize(s.hr_depth, s.anchors);
    EvalRow row;
    row.id = s.id;
    row.rmse_model = rmse(denormalize(pred, s.anchors), truth);
    row.rmse_bicubic = rmse(denormalize(depth_up, s.anchors), truth);
    report.rows.push_back(row);
  }
  if (!report.rows.empty()) {
    for (const auto& r : report.rows) {
      report.mean_rmse_model += r.rmse_model;
      report.mean_rmse_bicubic += r.rmse_bicubic;
    }
    report.mean_rmse_model /= static_cast<double>(report.rows.size());
    report.mean_rmse_bicubic /= static_cast<double>(report.rows.size());
  }
  return report;
}

EvalReport evaluate(const Checkpoint& ckpt, const DatasetManifest& manifest, int scale) {
  return evaluate(ckpt.params, ckpt.meta.train.model, manifest, scale);
}

std::string eval_report_csv(const EvalReport& report) {
  std::string out = "id,rmse_model,rmse_bicubic\n";
  char buf[64];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), ",%.9g,%.9g\n", r.rmse_model, r.rmse_bicubic);
    out += r.id + buf;
  }
  return out;
}

}  // namespace igaf
