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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "igaf/ablate.hpp"
#include "igaf/blocks.hpp"
#include "igaf/checkpoint.hpp"
#include "igaf/data.hpp"
#include "igaf/error.hpp"
#include "igaf/gradcheck_suite.hpp"
#include "igaf/image_io.hpp"
#include "igaf/resize.hpp"
#include "igaf/run_config.hpp"
#include "igaf/train.hpp"

namespace igaf::cli {
namespace {

namespace fs = std::filesystem;

// Fresh directory <base>/<UTC timestamp>-seed<k>, suffixed when taken.
fs::path unique_run_dir(const fs::path& base, std::uint64_t seed) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream name;
  name << std::put_time(&tm, "%Y%m%d-%H%M%S") << "-seed" << seed;
  fs::path dir = base / name.str();
  for (int k = 1; fs::exists(dir); ++k) dir = base / (name.str() + "-" + std::to_string(k));
  return dir;
}

fs::path prepare_run_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.run_dir.empty()
                           ? unique_run_dir(cfg.train.checkpoint_dir, cfg.train.seed)
                           : fs::path(cfg.run_dir);
  fs::create_directories(dir);
  std::ofstream echo(dir / "resolved_config.json");
  echo << dump_run_config(cfg);
  if (!echo) throw DataError("cannot write " + (dir / "resolved_config.json").string());
  return dir;
}

DatasetManifest manifest_for(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw ConfigError("data.manifest is not set");
  return read_manifest(cfg.manifest);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  // synth
  fs::path out_dir;
  int count = 0;
  int size = 128;
  std::uint64_t seed = 0;
  int scale = 0;
  // train / ablate
  fs::path config;
  std::vector<std::string> sets;
  std::string variants;
  fs::path resume;
  // eval / infer
  fs::path ckpt;
  fs::path manifest;
  fs::path out;
  fs::path rgb;
  fs::path lr_depth;
  // gradcheck
  std::string block;
};

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.count < 0) throw ConfigError("--count must be >= 0");
  const int scale = o.scale > 0 ? o.scale : 4;
  synth_dataset(o.count, o.size, o.seed, o.out_dir, scale);
  out << "manifest: " << (o.out_dir / "manifest.txt").string() << "\n";
  return kOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config, o.sets);
  const DatasetManifest manifest = manifest_for(cfg);
  const fs::path dir = prepare_run_dir(cfg);
  TrainOptions options;
  options.run_dir = dir;
  options.resume_from = o.resume;
  options.verbose = true;
  const TrainResult result = train(cfg.train, manifest, options);
  out << "run_dir: " << dir.string() << "\n";
  out << "loss_log: " << result.loss_log_path.string() << "\n";
  out << "final_checkpoint: " << result.final_checkpoint_path.string() << "\n";
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(o.ckpt);
  const DatasetManifest manifest = read_manifest(o.manifest);
  const int scale = o.scale > 0 ? o.scale : ckpt.meta.train.model.scale;
  const EvalReport report = evaluate(ckpt, manifest, scale);
  const std::string csv = eval_report_csv(report);
  if (o.out.empty()) {
    out << csv;
  } else {
    std::ofstream f(o.out);
    f << csv;
    if (!f) throw DataError("cannot write " + o.out.string());
    out << "report: " << o.out.string() << "\n";
  }
  return kOk;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(o.ckpt);
  const ModelConfig& model = ckpt.meta.train.model;
  const Sample s = load_inference_pair(o.rgb, o.lr_depth);
  const TensorF upsampled = upsample_depth(s);
  const TensorF pred = predict(ckpt.params, model, s.rgb, upsampled);
  pred.assert_finite("inference output");
  write_depth16(o.out, depth_to_image16(denormalize(pred, s.anchors)));
  out << "wrote " << o.out.string() << "\n";
  return kOk;
}

int cmd_gradcheck(const Options& o, std::ostream& out) {
  const auto results = run_gradcheck_suite(o.block);
  bool ok = true;
  for (const auto& r : results) {
    out << std::left << std::setw(16) << r.block << " max_rel_error " << std::scientific
        << std::setprecision(3) << r.max_rel_error << (r.passed() ? "  ok" : "  FAIL") << "\n";
    ok = ok && r.passed();
  }
  out << std::defaultfloat;
  return ok ? kOk : kNumeric;
}

int cmd_ablate(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config, o.sets);
  std::vector<std::string> variants = split_list(o.variants);
  if (variants.size() == 1 && variants[0] == "all") {
    variants.clear();
    for (const auto& v : ablation_variants()) variants.push_back(v.name);
  }
  if (variants.empty()) throw ConfigError("--variants is empty");
  for (const auto& v : variants) find_ablation_variant(v);
  const DatasetManifest manifest = manifest_for(cfg);
  const fs::path dir = prepare_run_dir(cfg);
  const auto rows = ablate(cfg.train, manifest, variants, dir);
  const std::string table = format_ablation_table(rows);
  std::ofstream(dir / "ablation.txt") << table;
  out << table;
  out << "run_dir: " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guided depth super-resolution engine", "igaf"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic RGB-D dataset");
  synth->add_option("--out", o.out_dir, "Output directory")->required();
  synth->add_option("--count", o.count, "Number of scenes")->required();
  synth->add_option("--size", o.size, "Scene side length in pixels");
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("--scale", o.scale, "Upsampling factor recorded in the manifest");

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", o.config, "JSON config file")->required();
  train->add_option("--set", o.sets, "Override, key=value (repeatable)");
  train->add_option("--resume", o.resume, "Continue from a checkpoint directory");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  eval->add_option("--ckpt", o.ckpt, "Checkpoint directory")->required();
  eval->add_option("--manifest", o.manifest, "Dataset manifest")->required();
  eval->add_option("--out", o.out, "Write the CSV here instead of stdout");
  eval->add_option("--scale", o.scale, "Upsampling factor (defaults to the checkpoint's)");

  auto* infer = app.add_subcommand("infer", "Upsample one depth map");
  infer->add_option("--ckpt", o.ckpt, "Checkpoint directory")->required();
  infer->add_option("--rgb", o.rgb, "HR RGB guide")->required();
  infer->add_option("--lr-depth", o.lr_depth, "LR depth map")->required();
  infer->add_option("--out", o.out, "16-bit HR depth output")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  gradcheck->add_option("--block", o.block, "Check a single block");

  auto* abl = app.add_subcommand("ablate", "Train and compare architecture variants");
  abl->add_option("--config", o.config, "JSON config file")->required();
  abl->add_option("--set", o.sets, "Override, key=value (repeatable)");
  abl->add_option("--variants", o.variants, "Comma-separated variant names, or 'all'")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "igaf: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*synth) return cmd_synth(o, out);
    if (*train) return cmd_train(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*infer) return cmd_infer(o, out);
    if (*gradcheck) return cmd_gradcheck(o, out);
    if (*abl) return cmd_ablate(o, out);
  } catch (const ConfigError& e) {
    err << "igaf: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeError& e) {
    err << "igaf: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "igaf: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    err << "igaf: " << e.what() << "\n";
    return kNumeric;
  } catch (const fs::filesystem_error& e) {
    err << "igaf: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace igaf::cli
