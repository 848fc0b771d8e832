// Copyright 2026 The photosplat Authors
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

#include "photosplat/core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "photosplat/core/error.hpp"

namespace photosplat {
namespace fs = std::filesystem;
namespace {

[[noreturn]] void io_error(const fs::path& path, const std::string& what) {
  throw_error(ErrorCode::kIo, path.string() + ": " + what);
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

LoadedImage from_color(ColorImage color) {
  LoadedImage out;
  out.gray = to_grayscale(color);
  out.color = std::move(color);
  return out;
}

struct PngImageDeleter {
  void operator()(png_image* image) const {
    png_image_free(image);
    delete image;
  }
};

LoadedImage load_png(const fs::path& path) {
  std::unique_ptr<png_image, PngImageDeleter> image(new png_image{});
  image->version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(image.get(), path.string().c_str())) {
    io_error(path, std::string("cannot read PNG: ") + image->message);
  }
  const bool is_color = (image->format & PNG_FORMAT_FLAG_COLOR) != 0;
  image->format = is_color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = is_color ? 3 : 1;
  const int w = static_cast<int>(image->width);
  const int h = static_cast<int>(image->height);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(*image));
  if (!png_image_finish_read(image.get(), nullptr, buffer.data(), 0, nullptr)) {
    io_error(path, std::string("cannot decode PNG: ") + image->message);
  }
  ColorImage color(w, h);
  auto& data = color.data();
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
    for (int c = 0; c < 3; ++c) {
      const png_byte b = buffer[i * channels + (is_color ? c : 0)];
      data[3 * i + c] = b / 255.0;
    }
  }
  if (!is_color) {
    // Keep grayscale inputs exact rather than round-tripping through luma.
    std::vector<double> gray(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = buffer[i] / 255.0;
    return LoadedImage{std::move(color), IntensityImage(w, h, std::move(gray))};
  }
  return from_color(std::move(color));
}

// Netpbm header tokens, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

int parse_int(const fs::path& path, const std::string& token) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) io_error(path, "malformed header value '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    io_error(path, "malformed header value '" + token + "'");
  }
}

LoadedImage load_netpbm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open file");
  const std::string magic = next_token(in);
  const bool ascii = magic == "P2" || magic == "P3";
  const bool color = magic == "P3" || magic == "P6";
  if (magic != "P2" && magic != "P5" && magic != "P3" && magic != "P6") {
    io_error(path, "unsupported netpbm magic '" + magic + "'");
  }
  const int w = parse_int(path, next_token(in));
  const int h = parse_int(path, next_token(in));
  const int maxval = parse_int(path, next_token(in));
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) io_error(path, "invalid header");
  const int channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(w) * h * channels;
  std::vector<double> values(count);
  if (ascii) {
    for (auto& v : values) {
      const std::string tok = next_token(in);
      if (tok.empty()) io_error(path, "truncated pixel data");
      v = std::clamp(parse_int(path, tok), 0, maxval) / static_cast<double>(maxval);
    }
  } else {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      io_error(path, "truncated pixel data");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const int v = bytes == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
      values[i] = std::min(v, maxval) / static_cast<double>(maxval);
    }
  }
  if (!color) {
    IntensityImage gray(w, h, values);
    ColorImage c = gray_to_color(gray);
    return LoadedImage{std::move(c), std::move(gray)};
  }
  ColorImage c(w, h);
  c.data() = std::move(values);
  return from_color(std::move(c));
}

png_byte to_byte(double v) {
  return static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_png(const fs::path& path, int w, int h, bool color, const std::vector<png_byte>& px) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, px.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    io_error(path, "cannot write PNG: " + msg);
  }
}

}  // namespace

LoadedImage load_image(const fs::path& path) {
  if (!fs::exists(path)) io_error(path, "file does not exist");
  const std::string ext = lower_extension(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_netpbm(path);
  io_error(path, "unsupported image extension '" + ext + "'");
}

void save_png(const fs::path& path, const ColorImage& image) {
  std::vector<png_byte> px(image.data().size());
  std::transform(image.data().begin(), image.data().end(), px.begin(), to_byte);
  write_png(path, image.width(), image.height(), true, px);
}

void save_png(const fs::path& path, const IntensityImage& image) {
  std::vector<png_byte> px(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), px.begin(), to_byte);
  write_png(path, image.width(), image.height(), false, px);
}

void save_pgm(const fs::path& path, const IntensityImage& image, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  out << (binary ? "P5" : "P2") << "\n" << image.width() << " " << image.height() << "\n255\n";
  if (binary) {
    std::vector<png_byte> px(image.pixels().size());
    std::transform(image.pixels().begin(), image.pixels().end(), px.begin(), to_byte);
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        out << static_cast<int>(to_byte(image.at(x, y))) << (x + 1 < image.width() ? " " : "\n");
      }
    }
  }
  if (!out) io_error(path, "write failed");
}

void save_pfm(const fs::path& path, const FloatMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  out << "Pf\n" << map.width << " " << map.height << "\n-1.0\n";
  // PFM stores rows bottom to top, little-endian for a negative scale.
  for (int y = map.height - 1; y >= 0; --y) {
    for (int x = 0; x < map.width; ++x) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(map.at(x, y));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      out.write(reinterpret_cast<const char*>(&bits), 4);
    }
  }
  if (!out) io_error(path, "write failed");
}

FloatMap load_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open file");
  const std::string magic = next_token(in);
  if (magic != "Pf") io_error(path, "expected single-channel PFM ('Pf'), got '" + magic + "'");
  FloatMap map;
  map.width = parse_int(path, next_token(in));
  map.height = parse_int(path, next_token(in));
  const std::string scale_token = next_token(in);
  double scale = 0.0;
  try {
    scale = std::stod(scale_token);
  } catch (const std::logic_error&) {
    io_error(path, "malformed PFM scale");
  }
  if (map.width <= 0 || map.height <= 0 || scale == 0.0) io_error(path, "invalid PFM header");
  const bool little = scale < 0.0;
  map.values.resize(static_cast<std::size_t>(map.width) * map.height);
  for (int y = map.height - 1; y >= 0; --y) {
    for (int x = 0; x < map.width; ++x) {
      std::uint32_t bits = 0;
      in.read(reinterpret_cast<char*>(&bits), 4);
      if (!in) io_error(path, "truncated PFM data");
      const bool swap = little != (std::endian::native == std::endian::little);
      if (swap) bits = __builtin_bswap32(bits);
      map.values[static_cast<std::size_t>(y) * map.width + x] = std::bit_cast<float>(bits);
    }
  }
  return map;
}

}  // namespace photosplat
