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

#ifndef SADE_NOISE_IMAGE_HPP_
#define SADE_NOISE_IMAGE_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "sade/random.hpp"

namespace sade {

struct ImageSize {
  int width = 0;
  int height = 0;
};

// 8-bit RGB PNG whose channels are independent uniform draws over 0..255.
// Deterministic in (width, height, seed). Throws ZeroDimension.
std::string MakeNoiseImage(int width, int height, Seed seed);

// Reads the IHDR header only; nullopt if the bytes are not a PNG.
std::optional<ImageSize> PngDimensions(std::string_view png_bytes);

}  // namespace sade

#endif  // SADE_NOISE_IMAGE_HPP_
