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

#ifndef SADE_MANIFEST_HPP_
#define SADE_MANIFEST_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sade/random.hpp"

namespace sade {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct FileDigest {
  std::string path;
  std::string sha256;

  bool operator==(const FileDigest&) const = default;
};

struct RunManifest {
  std::string subcommand;
  nlohmann::ordered_json config;  // resolved options, no timestamps
  std::string config_digest;
  Seed seed = 0;
  std::string provider;
  std::string model;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::string tool_version{kToolVersion};
  std::string started_at;  // UTC, ISO 8601
  double wall_clock_seconds = 0.0;
};

// Files are hashed in the given order; directories hash every regular file
// beneath them in sorted order.
std::vector<FileDigest> HashFiles(std::span<const std::filesystem::path> paths);

// sha256 over the canonical config dump followed by each input digest.
std::string ComputeConfigDigest(const nlohmann::ordered_json& config,
                                std::span<const FileDigest> inputs);

nlohmann::ordered_json ManifestToJson(const RunManifest& manifest);
RunManifest ManifestFromJson(const nlohmann::ordered_json& doc);

// `<out>.manifest.json`, next to the artifact.
std::filesystem::path ManifestPathFor(const std::filesystem::path& output);
void WriteManifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest LoadManifest(const std::filesystem::path& path);

// Re-hashes the recorded inputs and recomputes the digest.
bool VerifyManifest(const RunManifest& manifest);

}  // namespace sade

#endif  // SADE_MANIFEST_HPP_
