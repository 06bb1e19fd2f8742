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

#include "igaf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "config_json.hpp"
#include "igaf/error.hpp"
#include "igaf/run_config.hpp"

namespace igaf {

std::string_view to_string(SkipLocation v) {
  return v == SkipLocation::after_fe ? "after_fe" : "after_wf";
}

std::string_view to_string(FusionKind v) {
  switch (v) {
    case FusionKind::igaf: return "igaf";
    case FusionKind::add: return "add";
    case FusionKind::concat: return "concat";
  }
  return "igaf";
}

SkipLocation parse_skip_location(std::string_view s) {
  if (s == "after_fe") return SkipLocation::after_fe;
  if (s == "after_wf") return SkipLocation::after_wf;
  throw ConfigError("unknown skip_location '" + std::string(s) + "' (after_fe|after_wf)");
}

FusionKind parse_fusion_kind(std::string_view s) {
  if (s == "igaf") return FusionKind::igaf;
  if (s == "add") return FusionKind::add;
  if (s == "concat") return FusionKind::concat;
  throw ConfigError("unknown fusion_kind '" + std::string(s) + "' (igaf|add|concat)");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("model config: " + msg); };
  if (channels < 1) fail("channels must be positive");
  if (ca_reduction < 1) fail("ca_reduction must be positive");
  if (channels % ca_reduction != 0) {
    fail("channels (" + std::to_string(channels) + ") not divisible by ca_reduction (" +
         std::to_string(ca_reduction) + ")");
  }
  if (n_fe < 1) fail("n_fe must be >= 1");
  if (num_igaf < 1) fail("num_igaf must be >= 1");
  if (scale != 4 && scale != 8 && scale != 16) fail("scale must be one of 4, 8, 16");
  if (wf_dilations.empty()) fail("wf_dilations must not be empty");
  for (int d : wf_dilations) {
    if (d < 1) fail("wf_dilations must be strictly positive");
  }
  if (saf_mlp_layers != 1 && saf_mlp_layers != 2) fail("saf_mlp_layers must be 1 or 2");
  if (!std::isfinite(leaky_slope) || leaky_slope < 0.0 || leaky_slope >= 1.0) {
    fail("leaky_slope must be in [0, 1)");
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) fail("dropout_p must be in [0, 1)");
}

void Schedule::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("schedule: " + msg); };
  if (!(base_lr > 0.0f) || !std::isfinite(base_lr)) fail("base_lr must be positive");
  if (!(gamma > 0.0f && gamma <= 1.0f)) fail("gamma must be in (0, 1]");
  if (total_epochs < 1) fail("total_epochs must be positive");
  for (std::size_t i = 0; i < milestones.size(); ++i) {
    if (milestones[i] < 0 || milestones[i] >= total_epochs) {
      fail("milestone " + std::to_string(milestones[i]) + " outside [0, total_epochs)");
    }
    if (i > 0 && milestones[i] <= milestones[i - 1]) fail("milestones must be strictly increasing");
  }
}

void TrainConfig::validate() const {
  model.validate();
  schedule.validate();
  auto fail = [](const std::string& msg) { throw ConfigError("train config: " + msg); };
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (patch < 1 || patch % model.scale != 0) {
    fail("patch (" + std::to_string(patch) + ") must be a positive multiple of scale (" +
         std::to_string(model.scale) + ")");
  }
  if (epochs < 0) fail("epochs must be >= 0");
  if (epochs > schedule.total_epochs) fail("epochs exceeds schedule.total_epochs");
  if (eval_every < 0) fail("eval_every must be >= 0");
}

namespace {

using nlohmann::json;

struct KeySpec {
  const char* name;
  std::function<json(const RunConfig&)> get;
  std::function<void(RunConfig&, const json&)> set;
};

[[noreturn]] void type_error(const std::string& key, const char* expected, const json& v) {
  throw ConfigError("config key '" + key + "' expects " + expected + ", got " + v.dump());
}

int as_int(const std::string& key, const json& v) {
  if (!v.is_number_integer()) type_error(key, "an integer", v);
  return v.get<int>();
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    type_error(key, "a non-negative integer", v);
  }
  return v.get<std::uint64_t>();
}

float as_float(const std::string& key, const json& v) {
  if (!v.is_number()) type_error(key, "a number", v);
  return v.get<float>();
}

double as_double(const std::string& key, const json& v) {
  if (!v.is_number()) type_error(key, "a number", v);
  return v.get<double>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) type_error(key, "a boolean", v);
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) type_error(key, "a string", v);
  return v.get<std::string>();
}

std::vector<int> as_int_list(const std::string& key, const json& v) {
  if (!v.is_array()) type_error(key, "an array of integers", v);
  std::vector<int> out;
  for (const auto& e : v) out.push_back(as_int(key, e));
  return out;
}

template <typename V>
json encode(const V& v) {
  return json(v);
}

// Shortest decimal that round-trips the float, so 0.00025f echoes as 0.00025.
template <>
json encode(const float& v) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof(buf), v).ptr;
  return json(std::strtod(std::string(buf, end).c_str(), nullptr));
}

#define IGAF_KEY(NAME, FIELD, CONV)                                            \
  KeySpec {                                                                    \
    NAME, [](const RunConfig& c) { return encode(c.FIELD); },                  \
        [](RunConfig& c, const json& v) { c.FIELD = CONV(NAME, v); }           \
  }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      IGAF_KEY("model.channels", train.model.channels, as_int),
      IGAF_KEY("model.n_fe", train.model.n_fe, as_int),
      IGAF_KEY("model.num_igaf", train.model.num_igaf, as_int),
      IGAF_KEY("model.scale", train.model.scale, as_int),
      IGAF_KEY("model.wf_dilations", train.model.wf_dilations, as_int_list),
      IGAF_KEY("model.ca_reduction", train.model.ca_reduction, as_int),
      IGAF_KEY("model.saf_mlp_layers", train.model.saf_mlp_layers, as_int),
      IGAF_KEY("model.saf_weighted", train.model.saf_weighted, as_bool),
      IGAF_KEY("model.use_wf", train.model.use_wf, as_bool),
      KeySpec{"model.skip_location",
              [](const RunConfig& c) { return json(to_string(c.train.model.skip_location)); },
              [](RunConfig& c, const json& v) {
                c.train.model.skip_location =
                    parse_skip_location(as_string("model.skip_location", v));
              }},
      KeySpec{"model.fusion_kind",
              [](const RunConfig& c) { return json(to_string(c.train.model.fusion_kind)); },
              [](RunConfig& c, const json& v) {
                c.train.model.fusion_kind = parse_fusion_kind(as_string("model.fusion_kind", v));
              }},
      IGAF_KEY("model.leaky_slope", train.model.leaky_slope, as_double),
      IGAF_KEY("model.dropout_p", train.model.dropout_p, as_double),
      IGAF_KEY("schedule.base_lr", train.schedule.base_lr, as_float),
      IGAF_KEY("schedule.milestones", train.schedule.milestones, as_int_list),
      IGAF_KEY("schedule.gamma", train.schedule.gamma, as_float),
      IGAF_KEY("schedule.total_epochs", train.schedule.total_epochs, as_int),
      IGAF_KEY("train.batch_size", train.batch_size, as_int),
      IGAF_KEY("train.patch", train.patch, as_int),
      IGAF_KEY("train.epochs", train.epochs, as_int),
      IGAF_KEY("train.seed", train.seed, as_u64),
      IGAF_KEY("train.eval_every", train.eval_every, as_int),
      IGAF_KEY("train.checkpoint_dir", train.checkpoint_dir, as_string),
      IGAF_KEY("data.manifest", manifest, as_string),
      IGAF_KEY("run.dir", run_dir, as_string),
  };
  return specs;
}

#undef IGAF_KEY

const KeySpec& find_key(std::string_view name) {
  for (const auto& k : key_specs()) {
    if (name == k.name) return k;
  }
  throw ConfigError("unknown config key '" + std::string(name) + "'");
}

bool is_train_key(std::string_view name) {
  return name.starts_with("model.") || name.starts_with("schedule.") ||
         name.starts_with("train.");
}

void apply_object(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object with dotted keys");
  for (const auto& [key, value] : j.items()) find_key(key).set(cfg, value);
}

}  // namespace

std::vector<std::string> run_config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_specs()) out.emplace_back(k.name);
  return out;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  find_key(key).set(cfg, value);
}

RunConfig parse_run_config(std::string_view json_text, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  const json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  apply_object(cfg, j);
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.train.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_run_config(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  for (const auto& k : key_specs()) j[k.name] = k.get(cfg);
  return j.dump(2) + "\n";
}

namespace detail {

nlohmann::ordered_json train_config_to_json(const TrainConfig& cfg) {
  RunConfig rc;
  rc.train = cfg;
  nlohmann::ordered_json j;
  for (const auto& k : key_specs()) {
    if (is_train_key(k.name)) j[k.name] = k.get(rc);
  }
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  RunConfig rc;
  if (!j.is_object()) throw DataError("stored config is not a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!is_train_key(key)) throw DataError("unexpected stored config key '" + key + "'");
    find_key(key).set(rc, value);
  }
  return rc.train;
}

}  // namespace detail
}  // namespace igaf
