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

#ifndef SADE_REPORT_HPP_
#define SADE_REPORT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sade/eval.hpp"

namespace sade {

enum class ReportFormat { kJson, kMarkdown };

ReportFormat ParseReportFormat(std::string_view name);

nlohmann::ordered_json EvalReportToJson(const EvalReport& report);
EvalReport EvalReportFromJson(const nlohmann::json& doc);
EvalReport LoadEvalReport(const std::filesystem::path& path);

// Deterministic rendering. Every branch must appear exactly once in
// report.branches, otherwise IncompleteResults is thrown.
std::string EmitReport(const EvalReport& report, ReportFormat format);

// Human-evaluation table with an "origin ref." row and a "SADE ref." row.
std::string HumanEvalMarkdown(std::span<const HumanEvalRow> rows);

}  // namespace sade

#endif  // SADE_REPORT_HPP_
