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

#include <string>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "sade/debias.hpp"
#include "sade/encoding.hpp"
#include "sade/error.hpp"

namespace sade {
namespace {

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_relative() ? base / p : p;
}

template <typename T>
T Get(const toml::table& table, std::string_view key, T fallback) {
  if (const toml::node* node = table.get(key)) {
    if (auto v = node->value<T>()) return *v;
    throw ConfigError("config key '" + std::string(key) + "' has the wrong type");
  }
  return fallback;
}

PositivePolicy ParsePositivePolicy(const std::string& name) {
  if (name == "strict") return PositivePolicy::kStrict;
  if (name == "first") return PositivePolicy::kFirst;
  if (name == "random") return PositivePolicy::kSeededRandom;
  throw ConfigError("unknown positive_policy '" + name + "'");
}

}  // namespace

SadeConfig ParseSadeConfig(std::string_view toml_text,
                           const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw ParseError(e.source().begin.line, std::string(e.description()));
  }

  SadeConfig cfg;
  cfg.name = Get<std::string>(root, "name", cfg.name);
  cfg.version = Get<std::string>(root, "version", cfg.version);
  const std::int64_t seed = Get<std::int64_t>(root, "seed", 0);
  if (seed < 0) throw ConfigError("seed must be non-negative");
  cfg.seed = static_cast<Seed>(seed);
  if (auto pool = root.get("pool")) {
    auto v = pool->value<std::string>();
    if (!v) throw ConfigError("config key 'pool' must be a string");
    cfg.pool = Resolve(base_dir, *v);
  }
  const std::int64_t negatives = Get<std::int64_t>(root, "negatives_per_item", 2);
  const std::int64_t bins = Get<std::int64_t>(root, "bins", 20);
  if (negatives < 1) throw ConfigError("negatives_per_item must be >= 1");
  if (bins < 1) throw ConfigError("bins must be >= 1");
  cfg.negatives_per_item = static_cast<std::size_t>(negatives);
  cfg.bins = static_cast<std::size_t>(bins);

  const std::string scope = Get<std::string>(root, "normalization", "branch");
  if (scope == "branch") {
    cfg.normalization = NormalizationScope::kBranch;
  } else if (scope == "dataset") {
    cfg.normalization = NormalizationScope::kDataset;
  } else {
    throw ConfigError("normalization must be 'branch' or 'dataset'");
  }
  cfg.aggregation = ParsePairAggregation(Get<std::string>(root, "aggregation", "mean"));
  cfg.gate.gate = ParseSignificanceGate(Get<std::string>(root, "gate", "none"));
  cfg.gate.alpha = Get<double>(root, "alpha", cfg.gate.alpha);

  if (const toml::table* provider = root["provider"].as_table()) {
    cfg.provider_endpoint = Get<std::string>(*provider, "endpoint", "");
    // mock tables sit next to the config like every other input
    for (std::string_view scheme : {"mock://", "mock-digest://"}) {
      if (cfg.provider_endpoint.starts_with(scheme)) {
        std::filesystem::path table = cfg.provider_endpoint.substr(scheme.size());
        if (table.is_relative()) {
          cfg.provider_endpoint = std::string(scheme) + (base_dir / table).string();
        }
      }
    }
    cfg.model = Get<std::string>(*provider, "model", "");
    const std::int64_t parallel = Get<std::int64_t>(*provider, "parallel", 1);
    if (parallel < 1) throw ConfigError("provider.parallel must be >= 1");
    cfg.parallel = static_cast<std::size_t>(parallel);
  }

  if (const toml::table* tau = root["tau"].as_table()) {
    for (const auto& [key, node] : *tau) {
      auto branch = ParseBranch(key.str());
      if (!branch) throw ConfigError("unknown branch in [tau]: '" + std::string(key.str()) + "'");
      auto value = node.value<double>();
      if (!value) throw ConfigError("tau values must be numbers");
      cfg.tau[*branch] = *value;
    }
  }

  if (const toml::array* sources = root["source"].as_array()) {
    for (const toml::node& node : *sources) {
      const toml::table* t = node.as_table();
      if (!t) throw ConfigError("[[source]] entries must be tables");
      SourceSpec spec;
      const std::string branch = Get<std::string>(*t, "branch", "");
      auto parsed = ParseBranch(branch);
      if (!parsed) throw ConfigError("source has unknown branch '" + branch + "'");
      spec.branch = *parsed;
      spec.label = Get<std::string>(*t, "label", "");
      const std::string path = Get<std::string>(*t, "path", "");
      if (path.empty()) throw ConfigError("source needs a 'path'");
      spec.path = Resolve(base_dir, path);
      spec.positive_policy =
          ParsePositivePolicy(Get<std::string>(*t, "positive_policy", "strict"));
      if (spec.label.empty()) spec.label = spec.path.stem().string();
      cfg.sources.push_back(std::move(spec));
    }
  }
  cfg.Check();
  return cfg;
}

SadeConfig LoadSadeConfig(const std::filesystem::path& path) {
  return ParseSadeConfig(ReadFile(path), path.parent_path());
}

}  // namespace sade
