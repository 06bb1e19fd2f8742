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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace igaf {

/// Interleaved raster with 1 or 3 channels.
template <typename Pixel>
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<Pixel> pixels;  // row-major, channel-interleaved

  Pixel& at(int y, int x, int ch = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + ch];
  }
  Pixel at(int y, int x, int ch = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + ch];
  }
};

using Image8 = Image<std::uint8_t>;
using Image16 = Image<std::uint16_t>;

// Format is chosen by extension: .png, or .ppm (P6) / .pgm (P5).
// Errors raise DataError naming the file.
Image8 read_rgb8(const std::filesystem::path& path);
Image16 read_depth16(const std::filesystem::path& path);
void write_rgb8(const std::filesystem::path& path, const Image8& image);
void write_depth16(const std::filesystem::path& path, const Image16& image);

}  // namespace igaf
