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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "igaf/data.hpp"
#include "igaf/error.hpp"
#include "igaf/image_io.hpp"

namespace igaf {
namespace fs = std::filesystem;
namespace {

struct Shape2D {
  bool ellipse;
  double cx, cy, rx, ry;
  std::uint16_t depth;
  std::array<double, 3> color;
  int stripe_axis;  // -1 none, 0 horizontal, 1 vertical, 2 diagonal
  int stripe_period;

  bool contains(double x, double y) const {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    return ellipse ? dx * dx + dy * dy <= 1.0 : std::fabs(dx) <= 1.0 && std::fabs(dy) <= 1.0;
  }

  // Texture that lives only in the RGB image.
  double shade(int x, int y) const {
    if (stripe_axis < 0) return 1.0;
    const int coord = stripe_axis == 0 ? y : stripe_axis == 1 ? x : x + y;
    return (coord / stripe_period) % 2 == 0 ? 1.0 : 0.55;
  }
};

struct Scene {
  Image8 rgb;
  Image16 depth;
};

Scene render(int size, Rng& rng) {
  const auto bg_depth = static_cast<std::uint16_t>(6000 + 50 * rng.uniform_index(60));
  const std::array<double, 3> bg_lo = {rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5),
                                       rng.uniform(0.1, 0.5)};
  const std::array<double, 3> bg_hi = {rng.uniform(0.4, 0.9), rng.uniform(0.4, 0.9),
                                       rng.uniform(0.4, 0.9)};

  const int count = 2 + static_cast<int>(rng.uniform_index(4));
  std::vector<Shape2D> shapes;
  for (int i = 0; i < count; ++i) {
    Shape2D s{};
    s.ellipse = rng.uniform() < 0.5;
    s.cx = rng.uniform(0.15, 0.85) * size;
    s.cy = rng.uniform(0.15, 0.85) * size;
    s.rx = rng.uniform(0.08, 0.3) * size;
    s.ry = rng.uniform(0.08, 0.3) * size;
    s.depth = static_cast<std::uint16_t>(1000 + 50 * rng.uniform_index(100));
    s.color = {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
    s.stripe_axis = rng.uniform() < 0.6 ? static_cast<int>(rng.uniform_index(3)) : -1;
    s.stripe_period = 2 + static_cast<int>(rng.uniform_index(5));
    shapes.push_back(s);
  }
  // Far objects first so nearer ones occlude them.
  std::stable_sort(shapes.begin(), shapes.end(),
                   [](const Shape2D& a, const Shape2D& b) { return a.depth > b.depth; });

  Scene scene;
  scene.rgb = Image8{size, size, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size * 3)};
  scene.depth = Image16{size, size, 1, std::vector<std::uint16_t>(static_cast<std::size_t>(size) * size)};
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double t = static_cast<double>(x) / std::max(1, size - 1);
      std::array<double, 3> color;
      for (int c = 0; c < 3; ++c) color[c] = bg_lo[c] + (bg_hi[c] - bg_lo[c]) * t;
      std::uint16_t depth = bg_depth;
      for (const auto& s : shapes) {
        if (!s.contains(x + 0.5, y + 0.5)) continue;
        depth = s.depth;
        const double k = s.shade(x, y);
        for (int c = 0; c < 3; ++c) color[c] = s.color[c] * k;
      }
      scene.depth.at(y, x) = depth;
      for (int c = 0; c < 3; ++c) {
        scene.rgb.at(y, x, c) =
            static_cast<std::uint8_t>(std::lround(std::clamp(color[c], 0.0, 1.0) * 255.0));
      }
    }
  }
  return scene;
}

std::string numbered(const char* stem, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d%s", stem, i, ext);
  return buf;
}

}  // namespace

DatasetManifest synth_dataset(int count, int size, std::uint64_t seed, const fs::path& out_dir,
                              int scale) {
  if (count < 0) throw ConfigError("synth: count must be non-negative");
  if (size < 16 || size % 16 != 0) {
    throw ConfigError("synth: size " + std::to_string(size) + " must be a positive multiple of 16");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw DataError("synth: cannot create output directory " + out_dir.string());
  }

  DatasetManifest manifest;
  manifest.root = out_dir;
  manifest.scale = scale;
  manifest.split = "train";
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    Scene scene = render(size, rng);
    // Redraw scenes where occlusion left a single depth level.
    while (std::set<std::uint16_t>(scene.depth.pixels.begin(), scene.depth.pixels.end()).size() < 2) {
      scene = render(size, rng);
    }
    ManifestEntry e{numbered("scene", i, ""), numbered("rgb", i, ".png"),
                    numbered("depth", i, ".png"), std::nullopt};
    write_rgb8(out_dir / e.rgb, scene.rgb);
    write_depth16(out_dir / e.depth, scene.depth);
    manifest.entries.push_back(std::move(e));
  }
  write_manifest(out_dir / "manifest.txt", manifest);
  return manifest;
}

}  // namespace igaf
