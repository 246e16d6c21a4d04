#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "consol/model.hpp"

namespace consol {

// Problem file: {resources, applications, pms, vm_types, profile[app][pm][type]}.
// Plan file: {placements: [{app, pm, type, count}], used_pms: [...]}, zero-based indices.
// Malformed documents raise InputError naming the offending field or line.

ConsolidationProblem problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const ConsolidationProblem& problem);

ConsolidationProblem parse_problem(std::string_view text);
std::string serialize_problem(const ConsolidationProblem& problem);

/// Parses the plan structure and recomputes provided/satisfied against `problem`.
DeploymentPlan plan_from_json(const ConsolidationProblem& problem, const nlohmann::json& doc);
nlohmann::json plan_to_json(const DeploymentPlan& plan);

DeploymentPlan parse_plan(const ConsolidationProblem& problem, std::string_view text);
std::string serialize_plan(const DeploymentPlan& plan);

/// Parses JSON text, converting syntax errors to InputError with line/column.
nlohmann::json parse_json_text(std::string_view text, const std::string& origin);

std::string read_text_file(const std::filesystem::path& path);
/// Throws InputError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

ConsolidationProblem load_problem(const std::filesystem::path& path);

}  // namespace consol
