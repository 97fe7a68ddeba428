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

#include <gtest/gtest.h>

#include <png.h>

#include <numeric>

#include "sade/error.hpp"
#include "sade/noise_image.hpp"

namespace sade {
namespace {

struct Decoded {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgb;
};

Decoded Decode(const std::string& bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  EXPECT_TRUE(png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()));
  image.format = PNG_FORMAT_RGB;
  Decoded out{static_cast<int>(image.width), static_cast<int>(image.height), {}};
  out.rgb.resize(PNG_IMAGE_SIZE(image));
  EXPECT_TRUE(png_image_finish_read(&image, nullptr, out.rgb.data(), 0, nullptr));
  return out;
}

TEST(NoiseImage, Deterministic) {
  EXPECT_EQ(MakeNoiseImage(2, 2, 17), MakeNoiseImage(2, 2, 17));
  EXPECT_NE(MakeNoiseImage(2, 2, 17), MakeNoiseImage(2, 2, 18));
}

TEST(NoiseImage, ZeroDimension) {
  EXPECT_THROW(MakeNoiseImage(0, 5, 1), ZeroDimension);
  EXPECT_THROW(MakeNoiseImage(5, 0, 1), ZeroDimension);
  EXPECT_THROW(MakeNoiseImage(-3, 5, 1), ZeroDimension);
}

TEST(NoiseImage, DecodesWithExpectedMean) {
  const Decoded d = Decode(MakeNoiseImage(64, 64, 99));
  EXPECT_EQ(d.width, 64);
  EXPECT_EQ(d.height, 64);
  ASSERT_EQ(d.rgb.size(), 12288u);
  const double mean =
      std::accumulate(d.rgb.begin(), d.rgb.end(), 0.0) / static_cast<double>(d.rgb.size());
  EXPECT_NEAR(mean, 128.0, 10.0);
}

TEST(NoiseImage, HeaderDimensions) {
  const auto size = PngDimensions(MakeNoiseImage(31, 7, 1));
  ASSERT_TRUE(size.has_value());
  EXPECT_EQ(size->width, 31);
  EXPECT_EQ(size->height, 7);
  EXPECT_FALSE(PngDimensions("GIF89a....").has_value());
  EXPECT_FALSE(PngDimensions("").has_value());
}

}  // namespace
}  // namespace sade
