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

#include "sade/manifest.hpp"

#include <algorithm>

#include "sade/encoding.hpp"
#include "sade/error.hpp"

namespace sade {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string HashPath(const fs::path& path) {
  if (!fs::is_directory(path)) return Sha256Hex(ReadFile(path));
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string joined;
  for (const fs::path& f : files) {
    joined += fs::relative(f, path).generic_string();
    joined += '\0';
    joined += Sha256Hex(ReadFile(f));
    joined += '\n';
  }
  return Sha256Hex(joined);
}

ordered_json DigestsToJson(std::span<const FileDigest> digests) {
  ordered_json out = ordered_json::array();
  for (const FileDigest& d : digests) out.push_back({{"path", d.path}, {"sha256", d.sha256}});
  return out;
}

std::vector<FileDigest> DigestsFromJson(const ordered_json& value) {
  std::vector<FileDigest> out;
  for (const ordered_json& d : value) {
    out.push_back({d.at("path").get<std::string>(), d.at("sha256").get<std::string>()});
  }
  return out;
}

}  // namespace

std::vector<FileDigest> HashFiles(std::span<const fs::path> paths) {
  std::vector<FileDigest> out;
  out.reserve(paths.size());
  for (const fs::path& p : paths) out.push_back({p.generic_string(), HashPath(p)});
  return out;
}

std::string ComputeConfigDigest(const ordered_json& config,
                                std::span<const FileDigest> inputs) {
  std::string text = config.dump();
  for (const FileDigest& d : inputs) {
    text += '\n';
    text += d.path;
    text += '\0';
    text += d.sha256;
  }
  return Sha256Hex(text);
}

ordered_json ManifestToJson(const RunManifest& m) {
  ordered_json out;
  out["subcommand"] = m.subcommand;
  out["tool_version"] = m.tool_version;
  out["config"] = m.config;
  out["config_digest"] = m.config_digest;
  out["seed"] = m.seed;
  out["provider"] = m.provider;
  out["model"] = m.model;
  out["inputs"] = DigestsToJson(m.inputs);
  out["outputs"] = DigestsToJson(m.outputs);
  out["started_at"] = m.started_at;
  out["wall_clock_seconds"] = m.wall_clock_seconds;
  return out;
}

RunManifest ManifestFromJson(const ordered_json& doc) {
  try {
    RunManifest m;
    m.subcommand = doc.at("subcommand").get<std::string>();
    m.tool_version = doc.value("tool_version", "");
    m.config = doc.at("config");
    m.config_digest = doc.at("config_digest").get<std::string>();
    m.seed = doc.value("seed", Seed{0});
    m.provider = doc.value("provider", "");
    m.model = doc.value("model", "");
    m.inputs = DigestsFromJson(doc.at("inputs"));
    if (doc.contains("outputs")) m.outputs = DigestsFromJson(doc["outputs"]);
    m.started_at = doc.value("started_at", "");
    m.wall_clock_seconds = doc.value("wall_clock_seconds", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("manifest: ") + e.what());
  }
}

fs::path ManifestPathFor(const fs::path& output) {
  fs::path p = output;
  if (p.has_filename()) return p += ".manifest.json";
  return p.parent_path() += ".manifest.json";
}

void WriteManifest(const RunManifest& manifest, const fs::path& path) {
  WriteFile(path, ManifestToJson(manifest).dump(2) + "\n");
}

RunManifest LoadManifest(const fs::path& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  return ManifestFromJson(doc);
}

bool VerifyManifest(const RunManifest& manifest) {
  std::vector<FileDigest> current;
  for (const FileDigest& d : manifest.inputs) {
    if (!fs::exists(d.path)) return false;
    current.push_back({d.path, HashPath(d.path)});
  }
  if (current != manifest.inputs) return false;
  return ComputeConfigDigest(manifest.config, current) == manifest.config_digest;
}

}  // namespace sade
