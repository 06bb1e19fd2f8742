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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "igaf/ablate.hpp"
#include "igaf/blocks.hpp"
#include "igaf/data.hpp"
#include "igaf/gradcheck_suite.hpp"
#include "igaf/ops.hpp"
#include "igaf/optim.hpp"
#include "igaf/resize.hpp"
#include "igaf/train.hpp"
#include "test_support.hpp"

namespace igaf {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome gradcheck_all_blocks() {
  const auto t0 = Clock::now();
  const auto results = run_gradcheck_suite();
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::string worst_block;
  bool ok = !results.empty();
  for (const auto& r : results) {
    ok = ok && r.max_rel_error < 1e-5;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_block = r.block;
    }
  }
  ok = ok && secs < 120.0;
  return {ok, std::to_string(results.size()) + " blocks, worst " + worst_block + " " +
                  fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome zero_params_is_bicubic() {
  TempDir dir("acc-zero");
  const DatasetManifest manifest = synth_dataset(3, 64, 5, dir.path());
  ModelConfig cfg;
  cfg.channels = 8;
  ParamStore<float> params = init_params<float>(cfg, 0);
  params.fill(0.0f);

  bool exact = true;
  for (const auto& entry : manifest.entries) {
    const Sample s = load_sample(manifest, entry, cfg.scale);
    const TensorF up = upsample_depth(s);
    exact = exact && testing::bitwise_equal(predict(params, cfg, s.rgb, up), up);
  }
  const EvalReport report = evaluate(params, cfg, manifest, cfg.scale);
  bool equal_rmse = report.rows.size() == manifest.entries.size();
  for (const auto& row : report.rows) equal_rmse = equal_rmse && row.rmse_model == row.rmse_bicubic;
  return {exact && equal_rmse, std::string("bit-exact ") + (exact ? "yes" : "no") +
                                   ", per-sample rmse equal " + (equal_rmse ? "yes" : "no")};
}

Outcome conv_matches_naive() {
  Rng rng(2024);
  TapeF tape(false);
  double worst = 0.0;
  bool saw_dil2 = false, saw_dil3 = false;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = trial % 5 == 0 ? 1 : 3;
    const int dil = k == 1 ? 1 : 1 + trial % 3;
    saw_dil2 = saw_dil2 || dil == 2;
    saw_dil3 = saw_dil3 || dil == 3;
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.uniform_index(2));
    const std::int64_t cin = 1 + static_cast<std::int64_t>(rng.uniform_index(5));
    const std::int64_t cout = 1 + static_cast<std::int64_t>(rng.uniform_index(5));
    const std::int64_t h = 3 + static_cast<std::int64_t>(rng.uniform_index(10));
    const std::int64_t w = 3 + static_cast<std::int64_t>(rng.uniform_index(10));
    const int pad = dil * (k - 1) / 2;
    const auto x = testing::random_tensor<float>({n, cin, h, w}, rng);
    const auto wt = testing::random_tensor<float>({cout, cin, k, k}, rng);
    const auto b = testing::random_tensor<float>({1, cout, 1, 1}, rng);
    const auto got = ops::conv2d(tape, x, wt, b, pad, dil);
    const auto want = testing::naive_conv2d(x, wt, b, pad, dil);
    if (got.shape() != want.shape()) return {false, "shape mismatch at trial " + std::to_string(trial)};
    worst = std::max(worst, testing::max_abs_diff(got, want));
  }
  const bool ok = worst < 1e-5 && saw_dil2 && saw_dil3;
  return {ok, "50 configs, max abs error " + fmt("%.3g", worst)};
}

double ramp(double x, double y) { return 0.37 * x - 0.11 * y + 2.0; }

// Worst interior deviation from the ramp; only output pixels whose four taps
// stay inside the source grid are compared.
double ramp_error(std::int64_t in, std::int64_t out) {
  TensorD img = TensorD::zeros({1, 1, in, in});
  for (std::int64_t y = 0; y < in; ++y) {
    for (std::int64_t x = 0; x < in; ++x) img.at(0, 0, y, x) = ramp(x, y);
  }
  const TensorD r = bicubic_resize(img, out, out);
  auto src = [&](std::int64_t i) { return (i + 0.5) * in / static_cast<double>(out) - 0.5; };
  auto interior = [&](double s) { return std::floor(s) - 1 >= 0 && std::floor(s) + 2 <= in - 1; };
  double worst = 0.0;
  for (std::int64_t y = 0; y < out; ++y) {
    if (!interior(src(y))) continue;
    for (std::int64_t x = 0; x < out; ++x) {
      if (!interior(src(x))) continue;
      worst = std::max(worst, std::fabs(r.at(0, 0, y, x) - ramp(src(x), src(y))));
    }
  }
  return worst;
}

Outcome bicubic_properties() {
  bool constants = true;
  for (auto [in, out] : {std::pair{16, 32}, std::pair{16, 64}, std::pair{32, 16}, std::pair{64, 16}}) {
    const auto r = bicubic_resize(TensorF::full({1, 2, in, in}, 0.625f), out, out);
    for (float v : r.data()) constants = constants && v == 0.625f;
  }
  double worst = 0.0;
  for (auto [in, out] : {std::pair{16, 32}, std::pair{16, 64}, std::pair{32, 16}, std::pair{64, 16}}) {
    worst = std::max(worst, ramp_error(in, out));
  }
  return {constants && worst < 1e-5, std::string("constants exact ") + (constants ? "yes" : "no") +
                                         ", ramp error x2/x4 up/down " + fmt("%.3g", worst)};
}

Outcome saf_limits() {
  ModelConfig cfg;
  cfg.channels = 8;
  ParamSpecs specs;
  append_saf_specs(specs, cfg, "s");
  ParamStore<double> zero = init_from_specs<double>(specs, cfg.leaky_slope, 1);
  zero.fill(0.0);
  TapeD tape(false);
  ForwardContext<double> ctx{tape, zero, cfg, false, nullptr};
  Rng rng(77);
  double worst = 0.0;
  bool symmetric = true;
  ModelConfig plain = cfg;
  plain.saf_weighted = false;
  ParamStore<double> none;
  ForwardContext<double> plain_ctx{tape, none, plain, false, nullptr};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_tensor<double>({1, 8, 5, 4}, rng, -3.0, 3.0);
    const auto b = testing::random_tensor<double>({1, 8, 5, 4}, rng, -3.0, 3.0);
    const auto y = saf_forward(ctx, "s", a, b);
    for (std::size_t i = 0; i < y.data().size(); ++i) {
      worst = std::max(worst, std::fabs(y.data()[i] - 0.5 * (a.data()[i] + b.data()[i])));
    }
    symmetric = symmetric && testing::bitwise_equal(saf_forward(plain_ctx, "s", a, b),
                                                    saf_forward(plain_ctx, "s", b, a));
  }
  return {worst < 1e-6 && symmetric, "zero-param deviation from mean " + fmt("%.3g", worst) +
                                         ", unweighted symmetric " + (symmetric ? "yes" : "no")};
}

Outcome schedule_values() {
  const Schedule s;
  const bool values = lr_at(s, 0) == 0.00025f && lr_at(s, 25) == 0.000125f;
  bool tail = true;
  for (int e = 150; e < 200; ++e) tail = tail && lr_at(s, e) == 3.90625e-6f;
  int plateaus = 1;
  for (int e = 1; e < s.total_epochs; ++e) plateaus += lr_at(s, e) != lr_at(s, e - 1);
  return {values && tail && plateaus == 7,
          "lr(0)=" + fmt("%.6g", lr_at(s, 0)) + " lr(25)=" + fmt("%.6g", lr_at(s, 25)) +
              " lr(150..199)=" + fmt("%.6g", lr_at(s, 150)) + ", " + std::to_string(plateaus) +
              " plateaus"};
}

// Synthetic overfit run. Thresholds: final-epoch L1 at most 0.2x the first
// epoch, mean model RMSE below bicubic, wall time under ten minutes.
Outcome overfit() {
  const auto t0 = Clock::now();
  TempDir dir("acc-overfit");
  const DatasetManifest manifest = synth_dataset(8, 128, 0, dir / "data");
  TrainConfig cfg;
  cfg.model.channels = 16;
  cfg.model.n_fe = 2;
  cfg.model.scale = 4;
  cfg.schedule.base_lr = 1e-3f;
  cfg.schedule.milestones = {40, 50};
  cfg.schedule.total_epochs = 60;
  cfg.epochs = 60;
  cfg.patch = 64;
  cfg.batch_size = 1;
  cfg.seed = 0;
  const TrainResult r = train(cfg, manifest);
  const EvalReport report = evaluate(r.final, manifest, cfg.model.scale);
  const double secs = seconds_since(t0);
  const double first = r.log.front().mean_l1;
  const double last = r.log.back().mean_l1;
  const bool ok = last <= 0.2 * first && report.mean_rmse_model < report.mean_rmse_bicubic &&
                  secs < 600.0;
  return {ok, "L1 " + fmt("%.4g", first) + " -> " + fmt("%.4g", last) + ", rmse model " +
                  fmt("%.2f", report.mean_rmse_model) + " vs bicubic " +
                  fmt("%.2f", report.mean_rmse_bicubic) + ", " + fmt("%.0f", secs) + " s"};
}

TrainConfig small_config(int epochs) {
  TrainConfig cfg;
  cfg.model.channels = 8;
  cfg.model.n_fe = 1;
  cfg.model.num_igaf = 2;
  cfg.schedule.base_lr = 1e-3f;
  cfg.schedule.milestones = {1};
  cfg.schedule.total_epochs = 2;
  cfg.epochs = epochs;
  cfg.patch = 32;
  cfg.batch_size = 2;
  cfg.seed = 11;
  return cfg;
}

Outcome determinism() {
  TempDir data("acc-det-data"), a("acc-det-a"), b("acc-det-b");
  const DatasetManifest manifest = synth_dataset(4, 64, 9, data.path());
  const TrainConfig cfg = small_config(2);
  const TrainResult ra = train(cfg, manifest, {a.path(), {}, false});
  const TrainResult rb = train(cfg, manifest, {b.path(), {}, false});
  bool same = slurp(ra.loss_log_path) == slurp(rb.loss_log_path);
  for (const char* blob : {"params.bin", "adam_m.bin", "adam_v.bin", "checkpoint.json"}) {
    same = same && slurp(ra.final_checkpoint_path / blob) == slurp(rb.final_checkpoint_path / blob);
  }
  return {same, std::string("loss log and checkpoint blobs ") + (same ? "identical" : "differ")};
}

Outcome ablation_variants_train() {
  TempDir data("acc-abl-data");
  const DatasetManifest manifest = synth_dataset(2, 64, 13, data.path());
  std::vector<std::string> names;
  for (const auto& v : ablation_variants()) names.push_back(v.name);
  const auto rows = ablate(small_config(1), manifest, names);
  bool trained = rows.size() == names.size() + 1;
  for (const auto& row : rows) trained = trained && std::isfinite(row.final_l1);

  const ModelConfig full;
  const std::int64_t n_full = model_param_count(full);
  const std::int64_t n_extra = model_param_count(apply_variant(full, "num_igaf=4"));
  const std::int64_t n_nowf = model_param_count(apply_variant(full, "use_wf=false"));
  const bool ordered = n_extra > n_full && n_full > n_nowf;
  return {trained && ordered, std::to_string(rows.size() - 1) + " variants trained 1 epoch, params " +
                                  std::to_string(n_extra) + " > " + std::to_string(n_full) +
                                  " > " + std::to_string(n_nowf)};
}

Outcome reference_values_disclosed() {
  std::vector<AblationRow> rows;
  AblationRow base;
  base.name = "base";
  base.reference_rmse = kReferenceFullModelRmse;
  rows.push_back(base);
  for (const auto& v : ablation_variants()) {
    AblationRow r;
    r.name = v.name;
    r.label = v.label;
    r.reference_rmse = v.reference_rmse;
    rows.push_back(r);
  }
  const std::string table = format_ablation_table(rows);
  bool listed = true;
  for (const char* v : {"1.12", "1.22", "1.23", "1.17", "1.15", "1.14", "x8 2.48", "x16 5.00"}) {
    listed = listed && table.find(v) != std::string::npos;
  }
  const bool disclosed = table.find("not reproducible") != std::string::npos;
  return {listed && disclosed, std::string("reference values listed ") + (listed ? "yes" : "no") +
                                   ", labelled non-reproducible " + (disclosed ? "yes" : "no")};
}

}  // namespace
}  // namespace igaf

int main() {
  using igaf::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient check on every block", igaf::gradcheck_all_blocks},
      {"zero parameters reproduce bicubic", igaf::zero_params_is_bicubic},
      {"conv2d matches naive loops", igaf::conv_matches_naive},
      {"bicubic constants and ramps", igaf::bicubic_properties},
      {"SAF limits", igaf::saf_limits},
      {"learning-rate schedule", igaf::schedule_values},
      {"synthetic overfit", igaf::overfit},
      {"bitwise determinism", igaf::determinism},
      {"ablation variants", igaf::ablation_variants_train},
      {"reference values disclosed", igaf::reference_values_disclosed},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%-4s %2zu %-36s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
