// Copyright 2026 The sade-bench Authors.
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

#include "sade/noise_image.hpp"

#include <png.h>

#include <cstdint>
#include <cstring>
#include <vector>

#include "sade/error.hpp"

namespace sade {
namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t ReadBigEndian32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

}  // namespace

std::string MakeNoiseImage(int width, int height, Seed seed) {
  if (width < 1 || height < 1) throw ZeroDimension();
  const std::size_t bytes = static_cast<std::size_t>(width) * height * 3;
  std::vector<unsigned char> pixels(bytes);
  Rng rng(seed);
  for (unsigned char& channel : pixels) {
    channel = static_cast<unsigned char>(rng.Next() >> 56);
  }

  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0,
                                 nullptr)) {
    throw Error("PngError", image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0,
                                 nullptr)) {
    throw Error("PngError", image.message);
  }
  out.resize(size);
  return out;
}

std::optional<ImageSize> PngDimensions(std::string_view png_bytes) {
  // Signature, IHDR length and type, then width and height.
  if (png_bytes.size() < 24) return std::nullopt;
  const auto* p = reinterpret_cast<const unsigned char*>(png_bytes.data());
  if (std::memcmp(p, kPngSignature, 8) != 0 || std::memcmp(p + 12, "IHDR", 4) != 0) {
    return std::nullopt;
  }
  ImageSize size{static_cast<int>(ReadBigEndian32(p + 16)),
                 static_cast<int>(ReadBigEndian32(p + 20))};
  if (size.width < 1 || size.height < 1) return std::nullopt;
  return size;
}

}  // namespace sade
