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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "igaf/ablate.hpp"
#include "igaf/blocks.hpp"
#include "igaf/checkpoint.hpp"
#include "igaf/data.hpp"
#include "igaf/error.hpp"
#include "igaf/train.hpp"
#include "test_support.hpp"

namespace igaf {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TrainConfig tiny_train(int epochs) {
  TrainConfig cfg;
  cfg.model.channels = 4;
  cfg.model.ca_reduction = 2;
  cfg.model.n_fe = 1;
  cfg.model.num_igaf = 1;
  cfg.schedule.base_lr = 1e-3f;
  cfg.schedule.milestones = {2};
  cfg.schedule.total_epochs = 4;
  cfg.epochs = epochs;
  cfg.patch = 16;
  cfg.batch_size = 2;
  cfg.seed = 3;
  return cfg;
}

class TrainTest : public ::testing::Test {
 protected:
  void SetUp() override { manifest_ = synth_dataset(3, 32, 21, data_.path()); }
  testing::TempDir data_{"train-data"};
  DatasetManifest manifest_;
};

TEST_F(TrainTest, ZeroEpochsReturnsInitialization) {
  const TrainConfig cfg = tiny_train(0);
  const TrainResult r = train(cfg, manifest_);
  EXPECT_TRUE(r.log.empty());
  EXPECT_TRUE(r.final.params.identical(init_params<float>(cfg.model, cfg.seed)));
  EXPECT_EQ(r.final.meta.epoch, 0);
}

TEST_F(TrainTest, IdenticalRunsAreBitwiseIdentical) {
  const TrainConfig cfg = tiny_train(3);
  testing::TempDir a("run-a"), b("run-b");
  const TrainResult ra = train(cfg, manifest_, {a.path(), {}, false});
  const TrainResult rb = train(cfg, manifest_, {b.path(), {}, false});
  EXPECT_EQ(slurp(ra.loss_log_path), slurp(rb.loss_log_path));
  for (const char* blob : {"params.bin", "adam_m.bin", "adam_v.bin", "checkpoint.json"}) {
    EXPECT_EQ(slurp(ra.final_checkpoint_path / blob), slurp(rb.final_checkpoint_path / blob)) << blob;
  }
  ASSERT_EQ(ra.log.size(), 3u);
  for (const auto& e : ra.log) EXPECT_TRUE(std::isfinite(e.mean_l1));
  EXPECT_EQ(ra.log[2].lr, 0.5e-3f);
}

TEST_F(TrainTest, ResumeMatchesUninterruptedRun) {
  TrainConfig cfg = tiny_train(4);
  cfg.eval_every = 2;
  testing::TempDir full("full"), resumed("resumed");
  const TrainResult straight = train(cfg, manifest_, {full.path(), {}, false});
  ASSERT_TRUE(fs::exists(full / "epoch_0002" / "checkpoint.json"));
  const TrainResult cont = train(cfg, manifest_, {resumed.path(), full / "epoch_0002", false});
  EXPECT_TRUE(cont.final.params.identical(straight.final.params));
  ASSERT_EQ(cont.log.size(), 2u);
  EXPECT_EQ(cont.log[1].mean_l1, straight.log[3].mean_l1);
  EXPECT_EQ(cont.final.adam.step, straight.final.adam.step);
}

TEST_F(TrainTest, ResumeRejectsDifferentModel) {
  TrainConfig cfg = tiny_train(1);
  testing::TempDir run("first");
  train(cfg, manifest_, {run.path(), {}, false});
  TrainConfig other = cfg;
  other.model.channels = 8;
  EXPECT_THROW(train(other, manifest_, {{}, run / "final", false}), ConfigError);
}

TEST_F(TrainTest, NonFiniteLossNamesTheStep) {
  const TrainConfig cfg = tiny_train(1);
  testing::TempDir run("nan");
  Checkpoint bad = train(tiny_train(0), manifest_).final;
  for (float& v : bad.params.at("stem_depth.bias").mutable_data()) v = std::nanf("");
  save_checkpoint(run / "bad", bad);
  try {
    train(cfg, manifest_, {{}, run / "bad", false});
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
  }
}

TEST_F(TrainTest, PatchLargerThanSampleIsAConfigError) {
  TrainConfig cfg = tiny_train(1);
  cfg.patch = 64;
  EXPECT_THROW(train(cfg, manifest_), ConfigError);
}

TEST_F(TrainTest, EmptyManifestIsADataError) {
  EXPECT_THROW(train(tiny_train(1), DatasetManifest{}), DataError);
}

TEST_F(TrainTest, ZeroParametersMatchBicubicExactly) {
  const TrainConfig cfg = tiny_train(0);
  ParamStore<float> p = init_params<float>(cfg.model, 1);
  p.fill(0.0f);
  const EvalReport r = evaluate(p, cfg.model, manifest_, 4);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.rmse_model, row.rmse_bicubic) << row.id;
    EXPECT_GT(row.rmse_bicubic, 0.0);
  }
  EXPECT_EQ(r.mean_rmse_model, r.mean_rmse_bicubic);
}

TEST_F(TrainTest, EvaluateSurvivesCheckpointRoundTrip) {
  testing::TempDir run("eval-rt");
  const TrainResult trained = train(tiny_train(2), manifest_, {run.path(), {}, false});
  const EvalReport direct = evaluate(trained.final, manifest_, 4);
  const EvalReport loaded = evaluate(load_checkpoint(trained.final_checkpoint_path), manifest_, 4);
  EXPECT_EQ(eval_report_csv(direct), eval_report_csv(loaded));
  EXPECT_EQ(eval_report_csv(direct).rfind("id,rmse_model,rmse_bicubic\n", 0), 0u);
}

TEST_F(TrainTest, EvaluateEdgeCases) {
  const TrainResult r = train(tiny_train(0), manifest_);
  const EvalReport empty = evaluate(r.final, DatasetManifest{}, 4);
  EXPECT_TRUE(empty.rows.empty());
  EXPECT_EQ(eval_report_csv(empty), "id,rmse_model,rmse_bicubic\n");
  EXPECT_THROW(evaluate(r.final, manifest_, 8), ConfigError);
}

TEST(Ablation, VariantTableAndToggles) {
  ASSERT_EQ(ablation_variants().size(), 7u);
  EXPECT_EQ(*find_ablation_variant("fusion=add").reference_rmse, 1.23);
  EXPECT_EQ(*find_ablation_variant("fusion=concat").reference_rmse, 1.22);
  EXPECT_EQ(*find_ablation_variant("saf_weighted=false").reference_rmse, 1.17);
  EXPECT_EQ(*find_ablation_variant("saf_mlp_layers=1").reference_rmse, 1.15);
  EXPECT_EQ(kReferenceFullModelRmse, 1.12);
  EXPECT_THROW(find_ablation_variant("use_wf=maybe"), ConfigError);

  const ModelConfig base;
  EXPECT_EQ(apply_variant(base, "num_igaf=4").num_igaf, 4);
  EXPECT_FALSE(apply_variant(base, "use_wf=false").use_wf);
  EXPECT_EQ(apply_variant(base, "skip_location=after_wf").skip_location, SkipLocation::after_wf);
  EXPECT_EQ(apply_variant(base, "fusion=concat").fusion_kind, FusionKind::concat);
  for (const auto& v : ablation_variants()) {
    EXPECT_NE(apply_variant(base, v.name), base) << v.name;
  }
}

TEST_F(TrainTest, AblateWithNoVariantsHasOnlyTheBase) {
  const auto rows = ablate(tiny_train(1), manifest_, {});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].name, "base");
  EXPECT_EQ(rows[0].param_count, model_param_count(tiny_train(1).model));
  const std::string table = format_ablation_table(rows);
  EXPECT_NE(table.find("1.12"), std::string::npos);
  EXPECT_NE(table.find("not reproducible"), std::string::npos);
}

}  // namespace
}  // namespace igaf
