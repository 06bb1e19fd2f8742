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

#include "igaf/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "igaf/error.hpp"

namespace igaf {
namespace {

namespace fs = std::filesystem;

enum class Format { png, pnm };

Format format_of(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return Format::png;
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return Format::pnm;
  throw DataError("unsupported image extension for " + path.string());
}

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

// Decodes any PNG into 8- or 16-bit samples with the requested channel count.
template <typename Pixel>
Image<Pixel> read_png(const fs::path& path, int channels) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError("cannot open " + path.string());
  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    throw DataError(path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("libpng initialization failed for " + path.string());
  }
  Image<Pixel> img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("corrupt PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  const bool source_gray = (color & PNG_COLOR_MASK_COLOR) == 0 && color != PNG_COLOR_TYPE_PALETTE;
  constexpr bool want16 = sizeof(Pixel) == 2;

  if (channels == 1 && !source_gray) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": expected a single-channel grayscale image");
  }
  if (want16 && depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": expected 16-bit samples, found " + std::to_string(depth));
  }
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (source_gray && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (!want16 && depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  if (channels == 3 && source_gray) png_set_gray_to_rgb(png);
  if (want16) png_set_swap(png);  // host little-endian samples
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = channels;
  if (static_cast<int>(png_get_channels(png, info)) != channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": unexpected channel layout");
  }
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * channels);
  rows.resize(static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() +
                                          static_cast<std::size_t>(y) * img.width * channels);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

template <typename Pixel>
void write_png(const fs::path& path, const Image<Pixel>& img) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw DataError("libpng initialization failed for " + path.string());
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("failed writing PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, sizeof(Pixel) * 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (sizeof(Pixel) == 2) png_set_swap(png);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(const_cast<Pixel*>(
        img.pixels.data() + static_cast<std::size_t>(y) * img.width * img.channels));
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(fp.get()) != 0) throw DataError("failed writing " + path.string());
}

// Reads one whitespace/comment separated header token of a PNM file.
std::string pnm_token(std::istream& in, const fs::path& path) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(c);
  }
  if (tok.empty()) throw DataError("truncated PNM header in " + path.string());
  return tok;
}

int pnm_int(std::istream& in, const fs::path& path) {
  const std::string tok = pnm_token(in, path);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw DataError("malformed PNM header in " + path.string());
  }
}

template <typename Pixel>
Image<Pixel> read_pnm(const fs::path& path, int channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string magic = pnm_token(in, path);
  const std::string expected = channels == 1 ? "P5" : "P6";
  if (magic != expected) {
    throw DataError(path.string() + ": expected " + expected + " image, found " + magic);
  }
  Image<Pixel> img;
  img.width = pnm_int(in, path);
  img.height = pnm_int(in, path);
  img.channels = channels;
  const int maxval = pnm_int(in, path);
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535) {
    throw DataError("invalid PNM dimensions in " + path.string());
  }
  const bool wide = maxval > 255;
  if (wide != (sizeof(Pixel) == 2)) {
    throw DataError(path.string() + ": expected " + (sizeof(Pixel) == 2 ? "16" : "8") +
                    "-bit samples (maxval " + std::to_string(maxval) + ")");
  }
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height * channels;
  img.pixels.resize(count);
  if (wide) {
    std::vector<unsigned char> raw(count * 2);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw DataError("truncated pixel data in " + path.string());
    }
    for (std::size_t i = 0; i < count; ++i) {
      img.pixels[i] = static_cast<Pixel>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
  } else {
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count))) {
      throw DataError("truncated pixel data in " + path.string());
    }
  }
  return img;
}

template <typename Pixel>
void write_pnm(const fs::path& path, const Image<Pixel>& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << (img.channels == 1 ? "P5" : "P6") << '\n'
      << img.width << ' ' << img.height << '\n'
      << (sizeof(Pixel) == 2 ? 65535 : 255) << '\n';
  if (sizeof(Pixel) == 2) {
    std::vector<unsigned char> raw(img.pixels.size() * 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  } else {
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
  }
  if (!out) throw DataError("failed writing " + path.string());
}

template <typename Pixel>
void check_image(const Image<Pixel>& img, int channels, const fs::path& path) {
  if (img.channels != channels || img.width < 1 || img.height < 1 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * channels) {
    throw DataError("inconsistent image buffer for " + path.string());
  }
}

}  // namespace

Image8 read_rgb8(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing file " + path.string());
  return format_of(path) == Format::png ? read_png<std::uint8_t>(path, 3)
                                        : read_pnm<std::uint8_t>(path, 3);
}

Image16 read_depth16(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing file " + path.string());
  return format_of(path) == Format::png ? read_png<std::uint16_t>(path, 1)
                                        : read_pnm<std::uint16_t>(path, 1);
}

void write_rgb8(const fs::path& path, const Image8& image) {
  check_image(image, 3, path);
  if (format_of(path) == Format::png) {
    write_png(path, image);
  } else {
    write_pnm(path, image);
  }
}

void write_depth16(const fs::path& path, const Image16& image) {
  check_image(image, 1, path);
  if (format_of(path) == Format::png) {
    write_png(path, image);
  } else {
    write_pnm(path, image);
  }
}

}  // namespace igaf
