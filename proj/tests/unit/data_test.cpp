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

#include "igaf/data.hpp"
#include "igaf/error.hpp"
#include "igaf/image_io.hpp"
#include "igaf/optim.hpp"
#include "test_support.hpp"

namespace igaf {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;
using testing::write_pair;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(LoadSample, WhiteRgbAndMinMaxDepth) {
  TempDir dir("load");
  std::vector<std::uint16_t> depth(8 * 8, 1000);
  for (std::size_t i = 0; i < depth.size(); i += 3) depth[i] = 3000;
  const auto manifest = read_manifest(write_pair(dir.path(), 8, 8, depth));
  const Sample s = load_sample(manifest, manifest.entries[0], 4);
  for (float v : s.rgb.data()) EXPECT_EQ(v, 1.0f);
  EXPECT_EQ(s.anchors.min, 1000.0f);
  EXPECT_EQ(s.anchors.max, 3000.0f);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    EXPECT_EQ(s.hr_depth.data()[i], depth[i] == 3000 ? 1.0f : 0.0f);
  }
  EXPECT_EQ(s.lr_depth.shape(), (Shape{1, 1, 2, 2}));
}

TEST(LoadSample, ConstantDepthIsRejected) {
  TempDir dir("const");
  const auto manifest = read_manifest(write_pair(dir.path(), 8, 8, std::vector<std::uint16_t>(64, 7)));
  try {
    load_sample(manifest, manifest.entries[0], 4);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero depth range"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("pair"), std::string::npos);
  }
}

TEST(LoadSample, PgmAndPpmRoundTrip) {
  TempDir dir("pnm");
  Image16 d{3, 2, 1, {0, 65535, 12, 300, 4000, 9}};
  Image8 rgb{3, 2, 3, std::vector<std::uint8_t>(18, 0)};
  for (std::size_t i = 0; i < rgb.pixels.size(); ++i) rgb.pixels[i] = static_cast<std::uint8_t>(i * 13);
  write_depth16(dir / "d.pgm", d);
  write_rgb8(dir / "c.ppm", rgb);
  EXPECT_EQ(read_depth16(dir / "d.pgm").pixels, d.pixels);
  EXPECT_EQ(read_rgb8(dir / "c.ppm").pixels, rgb.pixels);
  write_depth16(dir / "d.png", d);
  EXPECT_EQ(read_depth16(dir / "d.png").pixels, d.pixels);
}

TEST(LoadSample, UnreadableImageNamesTheFile) {
  TempDir dir("bad");
  std::ofstream(dir / "junk.png") << "not a png";
  try {
    read_depth16(dir / "junk.png");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("junk.png"), std::string::npos);
  }
}

TEST(Manifest, MissingFileNamesEntry) {
  TempDir dir("manifest");
  std::ofstream(dir / "m.txt") << "a\trgb.png\tdepth.png\n";
  try {
    read_manifest(dir / "m.txt");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(Manifest, MetadataAndSortingRoundTrip) {
  TempDir dir("meta");
  write_pair(dir.path(), 8, 8, std::vector<std::uint16_t>(64, 1));
  DatasetManifest m;
  m.split = "test";
  m.scale = 8;
  m.entries.push_back({"z", "rgb.png", "depth.png", std::nullopt});
  m.entries.push_back({"b", "rgb.png", "depth.png", fs::path("depth.png")});
  write_manifest(dir / "m.txt", m);
  const auto back = read_manifest(dir / "m.txt");
  EXPECT_EQ(back.split, "test");
  EXPECT_EQ(back.scale, 8);
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].id, "b");
  EXPECT_TRUE(back.entries[0].lr_depth.has_value());
  EXPECT_EQ(back.root, dir.path());
}

TEST(SimulateLr, ConstantAndIdentity) {
  const auto c = simulate_lr(TensorF::full({1, 1, 32, 32}, 0.4f), 4);
  EXPECT_EQ(c.shape(), (Shape{1, 1, 8, 8}));
  for (float v : c.data()) EXPECT_EQ(v, 0.4f);
  Rng rng(70);
  const auto x = testing::random_tensor<float>({1, 1, 9, 9}, rng);
  EXPECT_LT(testing::max_abs_diff(simulate_lr(x, 1), x), 1e-6);
  EXPECT_THROW(simulate_lr(TensorF::zeros({1, 1, 10, 8}), 4), ShapeError);
}

TEST(SimulateLr, SmoothRadialFieldMatchesAnalyticSamples) {
  const int n = 128, s = 4;
  auto f = [](double x, double y) {
    const double r2 = (x - 60.0) * (x - 60.0) + (y - 70.0) * (y - 70.0);
    return 0.5 + 0.5 * std::exp(-r2 / (2.0 * 30.0 * 30.0));
  };
  TensorF hr = TensorF::zeros({1, 1, n, n});
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) hr.at(0, 0, y, x) = static_cast<float>(f(x, y));
  }
  const auto lr = simulate_lr(hr, s);
  double worst = 0.0;
  for (int y = 0; y < n / s; ++y) {
    for (int x = 0; x < n / s; ++x) {
      const double expect = f((x + 0.5) * s - 0.5, (y + 0.5) * s - 0.5);
      worst = std::max(worst, std::fabs(lr.at(0, 0, y, x) - expect) / expect);
    }
  }
  EXPECT_LT(worst, 0.02);
}

Sample indexed_sample(int size, int scale) {
  Sample s;
  s.id = "grid";
  s.hr_depth = TensorF::zeros({1, 1, size, size});
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) s.hr_depth.at(0, 0, y, x) = static_cast<float>(y * size + x);
  }
  s.rgb = TensorF::zeros({1, 3, size, size});
  s.lr_depth = TensorF::zeros({1, 1, size / scale, size / scale});
  return s;
}

TEST(RandomCrop, FullSizeIsIdentity) {
  const Sample s = indexed_sample(32, 4);
  Rng rng(71);
  const Sample c = random_crop(s, 32, 4, rng);
  EXPECT_TRUE(testing::bitwise_equal(c.hr_depth, s.hr_depth));
}

TEST(RandomCrop, DeterministicForSeed) {
  const Sample s = indexed_sample(64, 4);
  Rng a(72), b(72);
  for (int i = 0; i < 10; ++i) {
    const Sample ca = random_crop(s, 16, 4, a);
    const Sample cb = random_crop(s, 16, 4, b);
    EXPECT_TRUE(testing::bitwise_equal(ca.hr_depth, cb.hr_depth));
  }
}

TEST(RandomCrop, OffsetsUniformOverAlignedPositions) {
  const int size = 512, patch = 256, scale = 4;
  const Sample s = indexed_sample(size, scale);
  Rng rng(73);
  const int positions = (size - patch) / scale + 1;
  ASSERT_EQ(positions, 65);
  std::vector<int> ys(positions, 0), xs(positions, 0);
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const Sample c = random_crop(s, patch, scale, rng);
    const auto corner = static_cast<int>(c.hr_depth.data()[0]);
    const int y0 = corner / size, x0 = corner % size;
    ASSERT_EQ(y0 % scale, 0);
    ASSERT_EQ(x0 % scale, 0);
    ++ys[y0 / scale];
    ++xs[x0 / scale];
  }
  auto chi2 = [&](const std::vector<int>& counts) {
    const double expect = static_cast<double>(draws) / positions;
    double acc = 0.0;
    for (int c : counts) acc += (c - expect) * (c - expect) / expect;
    return acc;
  };
  // 64 degrees of freedom; 104 is roughly the 0.1% upper tail.
  EXPECT_LT(chi2(ys), 104.0);
  EXPECT_LT(chi2(xs), 104.0);
}

TEST(RandomCrop, CropCommutesWithDownsampling) {
  TempDir dir("commute");
  const auto m = synth_dataset(1, 64, 5, dir.path());
  const Sample s = load_sample(m, m.entries[0], 4);
  Rng rng(74);
  for (int i = 0; i < 5; ++i) {
    const Sample c = random_crop(s, 32, 4, rng);
    const auto direct = simulate_lr(c.hr_depth, 4);
    for (int y = 1; y < 7; ++y) {
      for (int x = 1; x < 7; ++x) EXPECT_NEAR(direct.at(0, 0, y, x), c.lr_depth.at(0, 0, y, x), 1e-6);
    }
  }
}

TEST(RandomCrop, RejectsBadPatch) {
  const Sample s = indexed_sample(32, 4);
  Rng rng(75);
  EXPECT_THROW(random_crop(s, 30, 4, rng), ConfigError);
  EXPECT_THROW(random_crop(s, 64, 4, rng), ConfigError);
}

TEST(Denormalize, Examples) {
  Rng rng(76);
  const auto x = testing::random_tensor<float>({1, 1, 4, 4}, rng, 0, 1);
  EXPECT_TRUE(testing::bitwise_equal(denormalize(x, {0.0f, 1.0f}), x));
  const TensorF mid = denormalize(TensorF::full({1, 1, 2, 2}, 0.5f), {1000.0f, 3000.0f});
  for (float v : mid.data()) EXPECT_EQ(v, 2000.0f);
}

TEST(Denormalize, RoundTripWithinQuantization) {
  TempDir dir("rt");
  Rng rng(77);
  std::vector<std::uint16_t> depth(16 * 16);
  for (auto& d : depth) d = static_cast<std::uint16_t>(rng.uniform_index(65536));
  const auto m = read_manifest(write_pair(dir.path(), 16, 16, depth));
  const Sample s = load_sample(m, m.entries[0], 4);
  const auto back = denormalize(s.hr_depth, s.anchors);
  const double bound = (s.anchors.max - s.anchors.min) / 65535.0;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    EXPECT_LE(std::fabs(back.data()[i] - depth[i]), bound);
  }
  EXPECT_EQ(depth_to_image16(back).pixels, depth);
}

TEST(Synth, EmptyAndDeterministic) {
  TempDir a("synth-a"), b("synth-b"), e("synth-e");
  const auto empty = synth_dataset(0, 32, 1, e.path());
  EXPECT_TRUE(empty.entries.empty());
  EXPECT_TRUE(read_manifest(e / "manifest.txt").entries.empty());

  synth_dataset(3, 32, 9, a.path());
  synth_dataset(3, 32, 9, b.path());
  for (const auto& entry : fs::directory_iterator(a.path())) {
    const auto name = entry.path().filename().string();
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
  }
  EXPECT_THROW(synth_dataset(-1, 32, 1, e.path()), ConfigError);
}

TEST(Synth, BicubicBaselineLeavesWorkToDo) {
  TempDir dir("baseline");
  const auto m = synth_dataset(4, 64, 11, dir.path());
  for (const auto& entry : m.entries) {
    const Sample s = load_sample(m, entry, 4);
    EXPECT_GT(rmse(upsample_depth(s), s.hr_depth), 0.0) << entry.id;
    EXPECT_EQ(rmse(s.hr_depth, s.hr_depth), 0.0);
  }
}

TEST(Inference, AcceptsNonIntegerSizeRelation) {
  TempDir dir("infer");
  Image8 rgb{20, 16, 3, std::vector<std::uint8_t>(20 * 16 * 3, 128)};
  Image16 lr{7, 5, 1, std::vector<std::uint16_t>(35, 500)};
  lr.pixels[3] = 900;
  write_rgb8(dir / "rgb.png", rgb);
  write_depth16(dir / "lr.png", lr);
  const Sample s = load_inference_pair(dir / "rgb.png", dir / "lr.png");
  EXPECT_EQ(upsample_depth(s).shape(), (Shape{1, 1, 16, 20}));
  EXPECT_EQ(s.anchors.min, 500.0f);
  EXPECT_EQ(s.anchors.max, 900.0f);
}

TEST(StackBatch, ConcatenatesAlongBatch) {
  const auto b = stack_batch({TensorF::full({1, 2, 3, 3}, 1.0f), TensorF::full({1, 2, 3, 3}, 2.0f)});
  EXPECT_EQ(b.shape(), (Shape{2, 2, 3, 3}));
  EXPECT_EQ(b.at(1, 1, 2, 2), 2.0f);
  EXPECT_EQ(b.at(0, 1, 2, 2), 1.0f);
}

}  // namespace
}  // namespace igaf
