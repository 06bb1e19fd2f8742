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

#include "igaf/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "config_json.hpp"
#include "igaf/blocks.hpp"
#include "igaf/error.hpp"

namespace igaf {
namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are written as raw little-endian floats");

namespace {

constexpr const char* kIndexFile = "checkpoint.json";
constexpr const char* kParamsFile = "params.bin";
constexpr const char* kMomentMFile = "adam_m.bin";
constexpr const char* kMomentVFile = "adam_v.bin";

void write_blob(const fs::path& path, const std::vector<std::span<const float>>& chunks) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& c : chunks) {
    out.write(reinterpret_cast<const char*>(c.data()),
              static_cast<std::streamsize>(c.size() * sizeof(float)));
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<float> read_blob(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw DataError("checkpoint blob missing: " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % sizeof(float) != 0) throw DataError("truncated checkpoint blob " + path.string());
  std::vector<float> data(bytes / sizeof(float));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw DataError("failed reading " + path.string());
  return data;
}

std::string describe_mismatch(const ModelConfig& stored, const ModelConfig& expected) {
  TrainConfig a;
  TrainConfig b;
  a.model = stored;
  b.model = expected;
  const auto ja = detail::train_config_to_json(a);
  const auto jb = detail::train_config_to_json(b);
  std::string diff;
  for (const auto& [key, value] : ja.items()) {
    if (!key.starts_with("model.")) continue;
    if (value != jb.at(key)) {
      if (!diff.empty()) diff += ", ";
      diff += key + " " + value.dump() + " (checkpoint) vs " + jb.at(key).dump() + " (expected)";
    }
  }
  return diff;
}

}  // namespace

void save_checkpoint(const fs::path& dir, const Checkpoint& ckpt) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create checkpoint directory " + dir.string());

  json index = json::object();
  index["format_version"] = kCheckpointFormatVersion;
  index["epoch"] = ckpt.meta.epoch;
  index["config"] = detail::train_config_to_json(ckpt.meta.train);
  index["rng"] = {{"data", ckpt.meta.data_rng_state}, {"dropout", ckpt.meta.dropout_rng_state}};
  index["adam"] = {{"step", ckpt.adam.step},
                   {"beta1", ckpt.adam.hyper.beta1},
                   {"beta2", ckpt.adam.hyper.beta2},
                   {"eps", ckpt.adam.hyper.eps},
                   {"m_file", kMomentMFile},
                   {"v_file", kMomentVFile}};

  const auto& entries = ckpt.params.entries();
  if (ckpt.adam.m.size() != entries.size() || ckpt.adam.v.size() != entries.size()) {
    throw ConfigError("save_checkpoint: adam state does not match parameters");
  }
  std::vector<std::span<const float>> params, moments_m, moments_v;
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const Shape s = e.value.shape();
    tensors.push_back({{"name", e.name},
                       {"shape", {s.n, s.c, s.h, s.w}},
                       {"dtype", "f32"},
                       {"file", kParamsFile},
                       {"offset", offset}});
    offset += static_cast<std::uint64_t>(s.numel()) * sizeof(float);
    params.push_back(e.value.data());
    moments_m.emplace_back(ckpt.adam.m[k]);
    moments_v.emplace_back(ckpt.adam.v[k]);
  }
  index["tensors"] = std::move(tensors);

  write_blob(dir / kParamsFile, params);
  write_blob(dir / kMomentMFile, moments_m);
  write_blob(dir / kMomentVFile, moments_v);
  std::ofstream out(dir / kIndexFile, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / kIndexFile).string());
  out << index.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + (dir / kIndexFile).string());
}

Checkpoint load_checkpoint(const fs::path& dir, const std::optional<ModelConfig>& expected) {
  const fs::path index_path = dir / kIndexFile;
  std::ifstream in(index_path);
  if (!in) throw DataError("no checkpoint at " + dir.string() + " (missing " + kIndexFile + ")");
  std::stringstream ss;
  ss << in.rdbuf();
  const json index = json::parse(ss.str(), nullptr, false);
  if (index.is_discarded() || !index.is_object()) {
    throw DataError("malformed checkpoint index " + index_path.string());
  }

  Checkpoint ckpt;
  try {
    const int version = index.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw DataError("unsupported checkpoint format_version " + std::to_string(version) +
                      " in " + index_path.string());
    }
    ckpt.meta.epoch = index.at("epoch").get<int>();
    ckpt.meta.train = detail::train_config_from_json(index.at("config"));
    ckpt.meta.data_rng_state = index.at("rng").at("data").get<std::string>();
    ckpt.meta.dropout_rng_state = index.at("rng").at("dropout").get<std::string>();
    ckpt.adam.step = index.at("adam").at("step").get<std::int64_t>();
    ckpt.adam.hyper.beta1 = index.at("adam").at("beta1").get<double>();
    ckpt.adam.hyper.beta2 = index.at("adam").at("beta2").get<double>();
    ckpt.adam.hyper.eps = index.at("adam").at("eps").get<double>();
  } catch (const json::exception& e) {
    throw DataError("malformed checkpoint index " + index_path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError("invalid config in " + index_path.string() + ": " + e.what());
  }

  const ModelConfig& model = ckpt.meta.train.model;
  if (expected && !(*expected == model)) {
    throw ConfigError("checkpoint config mismatch at " + dir.string() + ": " +
                      describe_mismatch(model, *expected));
  }
  model.validate();

  struct Stored {
    Shape shape;
    std::uint64_t offset;
  };
  std::map<std::string, Stored> stored;
  for (const auto& t : index.at("tensors")) {
    const std::string name = t.at("name").get<std::string>();
    const auto dims = t.at("shape").get<std::vector<std::int64_t>>();
    if (dims.size() != 4 || t.at("dtype").get<std::string>() != "f32" ||
        t.at("file").get<std::string>() != kParamsFile) {
      throw DataError("checkpoint tensor '" + name + "' has an unsupported layout");
    }
    if (!stored.emplace(name, Stored{Shape{dims[0], dims[1], dims[2], dims[3]},
                                     t.at("offset").get<std::uint64_t>()})
             .second) {
      throw DataError("checkpoint lists tensor '" + name + "' twice");
    }
  }

  const std::vector<float> blob = read_blob(dir / kParamsFile);
  const std::vector<float> blob_m = read_blob(dir / kMomentMFile);
  const std::vector<float> blob_v = read_blob(dir / kMomentVFile);
  const ParamSpecs specs = model_param_specs(model);
  for (const auto& spec : specs) {
    const auto it = stored.find(spec.name);
    if (it == stored.end()) {
      throw DataError("checkpoint " + dir.string() + " is missing tensor '" + spec.name + "'");
    }
    if (it->second.shape != spec.shape) {
      throw DataError("checkpoint tensor '" + spec.name + "' has shape " +
                      it->second.shape.str() + ", config declares " + spec.shape.str());
    }
    const auto begin = it->second.offset / sizeof(float);
    const auto count = static_cast<std::uint64_t>(spec.shape.numel());
    if (it->second.offset % sizeof(float) != 0 || begin + count > blob.size() ||
        begin + count > blob_m.size() || begin + count > blob_v.size()) {
      throw DataError("checkpoint tensor '" + spec.name + "' lies outside the stored blobs");
    }
    TensorF& t = ckpt.params.add(spec.name, spec.shape);
    std::copy_n(blob.begin() + static_cast<std::ptrdiff_t>(begin), count, t.mutable_data().begin());
    ckpt.adam.m.emplace_back(blob_m.begin() + static_cast<std::ptrdiff_t>(begin),
                             blob_m.begin() + static_cast<std::ptrdiff_t>(begin + count));
    ckpt.adam.v.emplace_back(blob_v.begin() + static_cast<std::ptrdiff_t>(begin),
                             blob_v.begin() + static_cast<std::ptrdiff_t>(begin + count));
    stored.erase(it);
  }
  if (!stored.empty()) {
    throw DataError("checkpoint contains tensor '" + stored.begin()->first +
                    "' that the config does not declare");
  }
  return ckpt;
}

}  // namespace igaf
