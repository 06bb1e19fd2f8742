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

#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "igaf/data.hpp"
#include "igaf/image_io.hpp"
#include "igaf/run_config.hpp"
#include "test_support.hpp"

namespace igaf {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"synth", "--count", "2"}).code, cli::kUsage);
  EXPECT_EQ(run({"gradcheck", "--block", "nope"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, MissingConfigNamesThePath) {
  const Result r = run({"train", "--config", "/no/such/config.json"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("/no/such/config.json"), std::string::npos);
}

TEST(Cli, SynthWithZeroCountWritesEmptyManifest) {
  testing::TempDir dir("cli-synth");
  const Result r = run({"synth", "--out", dir.path().string(), "--count", "0", "--size", "32",
                        "--seed", "1"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(read_manifest(dir / "manifest.txt").entries.empty());
}

TEST(Cli, GradcheckSingleBlock) {
  const Result r = run({"gradcheck", "--block", "saf"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("saf"), std::string::npos);
  EXPECT_NE(r.out.find("ok"), std::string::npos);
}

TEST(Cli, MissingCheckpointIsADataError) {
  testing::TempDir dir("cli-eval");
  run({"synth", "--out", dir.path().string(), "--count", "1", "--size", "32"});
  const Result r = run({"eval", "--ckpt", (dir / "nothing").string(), "--manifest",
                        (dir / "manifest.txt").string()});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_NE(r.err.find("nothing"), std::string::npos);
}

TEST(Cli, EndToEndSynthTrainEvalInfer) {
  testing::TempDir dir("cli-e2e");
  const fs::path data = dir / "data";
  ASSERT_EQ(run({"synth", "--out", data.string(), "--count", "2", "--size", "32", "--seed", "4"}).code,
            cli::kOk);
  std::ofstream(dir / "cfg.json") << R"({"model.channels": 4, "model.ca_reduction": 2,
    "model.n_fe": 1, "model.num_igaf": 1, "train.patch": 16, "train.epochs": 5,
    "schedule.total_epochs": 2, "schedule.milestones": [1]})";
  const Result bad = run({"train", "--config", (dir / "cfg.json").string(), "--set",
                          "data.manifest=" + (data / "manifest.txt").string()});
  EXPECT_EQ(bad.code, cli::kUsage) << "epochs beyond the schedule must be rejected";

  const Result trained = run({"train", "--config", (dir / "cfg.json").string(), "--set",
                              "train.epochs=1", "--set",
                              "data.manifest=" + (data / "manifest.txt").string(), "--set",
                              "train.checkpoint_dir=" + (dir / "runs").string()});
  ASSERT_EQ(trained.code, cli::kOk) << trained.err;
  EXPECT_NE(trained.out.find("loss_log: "), std::string::npos);
  EXPECT_NE(trained.out.find("final_checkpoint: "), std::string::npos);

  fs::path run_dir;
  for (const auto& e : fs::directory_iterator(dir / "runs")) run_dir = e.path();
  ASSERT_FALSE(run_dir.empty());
  EXPECT_NE(run_dir.filename().string().find("seed0"), std::string::npos);
  const RunConfig echoed = load_run_config(run_dir / "resolved_config.json");
  EXPECT_EQ(echoed.train.epochs, 1);
  EXPECT_EQ(echoed.train.model.channels, 4);

  const Result evaluated = run({"eval", "--ckpt", (run_dir / "final").string(), "--manifest",
                                (data / "manifest.txt").string()});
  ASSERT_EQ(evaluated.code, cli::kOk) << evaluated.err;
  EXPECT_EQ(evaluated.out.rfind("id,rmse_model,rmse_bicubic\nscene_0000,", 0), 0u) << evaluated.out;

  Image16 lr = read_depth16(data / "depth_0000.png");
  Image16 small{8, 8, 1, std::vector<std::uint16_t>(64)};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) small.at(y, x) = lr.at(4 * y, 4 * x);
  }
  small.at(0, 0) = 1;
  small.at(7, 7) = 60000;
  write_depth16(dir / "lr.png", small);
  const Result inferred = run({"infer", "--ckpt", (run_dir / "final").string(), "--rgb",
                               (data / "rgb_0000.png").string(), "--lr-depth",
                               (dir / "lr.png").string(), "--out", (dir / "hr.png").string()});
  ASSERT_EQ(inferred.code, cli::kOk) << inferred.err;
  const Image16 hr = read_depth16(dir / "hr.png");
  EXPECT_EQ(hr.width, 32);
  EXPECT_EQ(hr.height, 32);
}

TEST(Cli, ResumeContinuesFromCheckpoint) {
  testing::TempDir dir("cli-resume");
  const fs::path data = dir / "data";
  ASSERT_EQ(run({"synth", "--out", data.string(), "--count", "2", "--size", "32"}).code, cli::kOk);
  std::ofstream(dir / "cfg.json") << R"({"model.channels": 4, "model.ca_reduction": 2,
    "model.n_fe": 1, "model.num_igaf": 1, "train.patch": 16, "train.epochs": 2,
    "train.eval_every": 1, "schedule.total_epochs": 2, "schedule.milestones": [1]})";
  const std::string manifest = "data.manifest=" + (data / "manifest.txt").string();
  const std::string cfg = (dir / "cfg.json").string();
  ASSERT_EQ(run({"train", "--config", cfg, "--set", manifest, "--set",
                 "run.dir=" + (dir / "full").string()}).code, cli::kOk);
  const Result resumed = run({"train", "--config", cfg, "--set", manifest, "--set",
                              "run.dir=" + (dir / "resumed").string(), "--resume",
                              (dir / "full" / "epoch_0001").string()});
  ASSERT_EQ(resumed.code, cli::kOk) << resumed.err;
  std::ifstream a(dir / "full" / "final" / "params.bin", std::ios::binary);
  std::ifstream b(dir / "resumed" / "final" / "params.bin", std::ios::binary);
  const std::string pa{std::istreambuf_iterator<char>(a), {}};
  const std::string pb{std::istreambuf_iterator<char>(b), {}};
  EXPECT_FALSE(pa.empty());
  EXPECT_EQ(pa, pb);

  EXPECT_EQ(run({"train", "--config", cfg, "--set", manifest, "--set",
                 "run.dir=" + (dir / "orphan").string(), "--resume", (dir / "missing").string()})
                .code,
            cli::kData);
}

TEST(Cli, AblateRejectsUnknownVariant) {
  testing::TempDir dir("cli-ablate");
  std::ofstream(dir / "cfg.json") << "{}";
  const Result r = run({"ablate", "--config", (dir / "cfg.json").string(), "--variants",
                        "fusion=add,bogus"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

}  // namespace
}  // namespace igaf
