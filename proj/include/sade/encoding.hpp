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

#ifndef SADE_ENCODING_HPP_
#define SADE_ENCODING_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace sade {

std::string Base64Encode(std::string_view bytes);
// Throws DataError on malformed input.
std::string Base64Decode(std::string_view text);

std::string Sha256Hex(std::string_view bytes);

// Whole-file helpers. ReadFile throws FileNotFound.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace sade

#endif  // SADE_ENCODING_HPP_
