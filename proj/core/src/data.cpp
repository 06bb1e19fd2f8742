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

#include "igaf/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "igaf/error.hpp"
#include "igaf/image_io.hpp"
#include "igaf/resize.hpp"

namespace igaf {
namespace fs = std::filesystem;

fs::path DatasetManifest::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : root / p;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) out.push_back(field);
  return out;
}

void parse_meta(DatasetManifest& m, const std::string& comment, const fs::path& path) {
  std::istringstream ss(comment);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (key == "split") {
      m.split = value;
    } else if (key == "scale") {
      try {
        m.scale = std::stoi(value);
      } catch (const std::exception&) {
        throw DataError(path.string() + ": bad scale '" + value + "'");
      }
    }
  }
}

TensorF depth_to_tensor(const Image16& img, float lo, float hi) {
  TensorF t = TensorF::zeros(Shape{1, 1, img.height, img.width});
  auto d = t.mutable_data();
  const double range = static_cast<double>(hi) - lo;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<float>((static_cast<double>(img.pixels[i]) - lo) / range);
  }
  return t;
}

TensorF rgb_to_tensor(const Image8& rgb) {
  TensorF t = TensorF::zeros(Shape{1, 3, rgb.height, rgb.width});
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < rgb.height; ++y) {
      for (int x = 0; x < rgb.width; ++x) {
        t.at(0, c, y, x) = static_cast<float>(rgb.at(y, x, c)) / 255.0f;
      }
    }
  }
  return t;
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  DatasetManifest m;
  m.root = path.parent_path();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_meta(m, line.substr(1), path);
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 3 or 4 tab-separated fields");
    }
    ManifestEntry e{fields[0], fields[1], fields[2], std::nullopt};
    if (fields.size() == 4) e.lr_depth = fields[3];
    for (const fs::path* p : {&e.rgb, &e.depth}) {
      if (!fs::exists(m.resolve(*p))) {
        throw DataError("manifest entry '" + e.id + "' references missing file " +
                        m.resolve(*p).string());
      }
    }
    if (e.lr_depth && !fs::exists(m.resolve(*e.lr_depth))) {
      throw DataError("manifest entry '" + e.id + "' references missing file " +
                      m.resolve(*e.lr_depth).string());
    }
    m.entries.push_back(std::move(e));
  }
  std::stable_sort(m.entries.begin(), m.entries.end(),
                   [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << "# split=" << manifest.split << " scale=" << manifest.scale << '\n';
  for (const auto& e : manifest.entries) {
    out << e.id << '\t' << e.rgb.generic_string() << '\t' << e.depth.generic_string();
    if (e.lr_depth) out << '\t' << e.lr_depth->generic_string();
    out << '\n';
  }
  if (!out) throw DataError("failed writing manifest " + path.string());
}

Sample load_sample(const DatasetManifest& manifest, const ManifestEntry& entry, int scale) {
  try {
    const Image8 rgb = read_rgb8(manifest.resolve(entry.rgb));
    const Image16 depth = read_depth16(manifest.resolve(entry.depth));
    if (rgb.width != depth.width || rgb.height != depth.height) {
      throw DataError("rgb is " + std::to_string(rgb.width) + "x" + std::to_string(rgb.height) +
                      " but depth is " + std::to_string(depth.width) + "x" +
                      std::to_string(depth.height));
    }
    const auto [lo_it, hi_it] = std::minmax_element(depth.pixels.begin(), depth.pixels.end());
    if (*lo_it == *hi_it) throw DataError("zero depth range");

    Sample s;
    s.id = entry.id;
    s.anchors = {static_cast<float>(*lo_it), static_cast<float>(*hi_it)};
    s.rgb = rgb_to_tensor(rgb);
    s.hr_depth = depth_to_tensor(depth, s.anchors.min, s.anchors.max);
    if (entry.lr_depth) {
      const Image16 lr = read_depth16(manifest.resolve(*entry.lr_depth));
      s.lr_depth = depth_to_tensor(lr, s.anchors.min, s.anchors.max);
    } else {
      s.lr_depth = simulate_lr(s.hr_depth, scale);
    }
    return s;
  } catch (const Error& e) {
    throw DataError("sample '" + entry.id + "': " + e.what());
  }
}

Sample load_inference_pair(const fs::path& rgb_path, const fs::path& lr_depth_path) {
  const Image8 rgb = read_rgb8(rgb_path);
  const Image16 lr = read_depth16(lr_depth_path);
  if (lr.width > rgb.width || lr.height > rgb.height) {
    throw DataError(lr_depth_path.string() + ": LR depth is " + std::to_string(lr.width) + "x" +
                    std::to_string(lr.height) + ", larger than the RGB guide " +
                    rgb_path.string() + " (" + std::to_string(rgb.width) + "x" +
                    std::to_string(rgb.height) + ")");
  }
  const auto [lo_it, hi_it] = std::minmax_element(lr.pixels.begin(), lr.pixels.end());
  if (*lo_it == *hi_it) throw DataError(lr_depth_path.string() + ": zero depth range");

  Sample s;
  s.id = rgb_path.stem().string();
  s.anchors = {static_cast<float>(*lo_it), static_cast<float>(*hi_it)};
  s.rgb = rgb_to_tensor(rgb);
  s.lr_depth = depth_to_tensor(lr, s.anchors.min, s.anchors.max);
  return s;
}

Image16 depth_to_image16(const TensorF& depth) {
  const Shape& sh = depth.shape();
  if (sh.n != 1 || sh.c != 1) throw ShapeError("depth_to_image16: expected [1,1,H,W], got " + sh.str());
  Image16 img;
  img.width = static_cast<int>(sh.w);
  img.height = static_cast<int>(sh.h);
  img.channels = 1;
  img.pixels.resize(static_cast<std::size_t>(sh.plane()));
  const auto d = depth.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double v = std::clamp(std::round(static_cast<double>(d[i])), 0.0, 65535.0);
    img.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return img;
}

TensorF simulate_lr(const TensorF& hr_depth, int scale) {
  const Shape s = hr_depth.shape();
  if (scale < 1 || s.h % scale != 0 || s.w % scale != 0) {
    throw ShapeError("simulate_lr: " + s.str() + " not divisible by scale " +
                     std::to_string(scale));
  }
  return bicubic_resize(hr_depth, s.h / scale, s.w / scale);
}

namespace {

TensorF crop(const TensorF& t, std::int64_t y0, std::int64_t x0, std::int64_t h, std::int64_t w) {
  const Shape s = t.shape();
  TensorF out = TensorF::zeros(Shape{s.n, s.c, h, w});
  for (std::int64_t n = 0; n < s.n; ++n)
    for (std::int64_t c = 0; c < s.c; ++c)
      for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x) out.at(n, c, y, x) = t.at(n, c, y0 + y, x0 + x);
  return out;
}

}  // namespace

Sample random_crop(const Sample& sample, int patch, int scale, Rng& rng) {
  const Shape hr = sample.hr_depth.shape();
  if (patch < 1 || patch % scale != 0) {
    throw ConfigError("patch " + std::to_string(patch) + " is not a multiple of scale " +
                      std::to_string(scale));
  }
  if (patch > hr.h || patch > hr.w) {
    throw ConfigError("patch " + std::to_string(patch) + " exceeds image " + hr.str() +
                      " of sample '" + sample.id + "'");
  }
  const Shape lr = sample.lr_depth.shape();
  if (lr.h * scale != hr.h || lr.w * scale != hr.w) {
    throw ShapeError("random_crop: sample '" + sample.id + "' has no integer LR/HR relation");
  }
  const auto ny = static_cast<std::uint64_t>((hr.h - patch) / scale + 1);
  const auto nx = static_cast<std::uint64_t>((hr.w - patch) / scale + 1);
  const auto y0 = static_cast<std::int64_t>(rng.uniform_index(ny)) * scale;
  const auto x0 = static_cast<std::int64_t>(rng.uniform_index(nx)) * scale;

  Sample out;
  out.id = sample.id;
  out.anchors = sample.anchors;
  out.rgb = crop(sample.rgb, y0, x0, patch, patch);
  out.hr_depth = crop(sample.hr_depth, y0, x0, patch, patch);
  out.lr_depth = crop(sample.lr_depth, y0 / scale, x0 / scale, patch / scale, patch / scale);
  return out;
}

TensorF denormalize(const TensorF& depth, const DepthAnchors& anchors) {
  TensorF out = TensorF::zeros(depth.shape());
  const auto d = depth.data();
  auto o = out.mutable_data();
  const double range = static_cast<double>(anchors.max) - anchors.min;
  for (std::size_t i = 0; i < d.size(); ++i) {
    o[i] = static_cast<float>(static_cast<double>(d[i]) * range + anchors.min);
  }
  return out;
}

TensorF upsample_depth(const Sample& sample) {
  const Shape s = sample.rgb.shape();
  return bicubic_resize(sample.lr_depth, s.h, s.w);
}

TensorF stack_batch(const std::vector<TensorF>& items) {
  if (items.empty()) throw ShapeError("stack_batch: no items");
  const Shape first = items.front().shape();
  std::vector<float> data;
  data.reserve(static_cast<std::size_t>(first.numel()) * items.size());
  for (const auto& t : items) {
    const Shape s = t.shape();
    if (s.n != 1 || s.c != first.c || s.h != first.h || s.w != first.w) {
      throw ShapeError("stack_batch: shape " + s.str() + " differs from " + first.str());
    }
    data.insert(data.end(), t.data().begin(), t.data().end());
  }
  return TensorF::from_data(Shape{static_cast<std::int64_t>(items.size()), first.c, first.h, first.w},
                            std::move(data));
}

}  // namespace igaf
