#include "consol/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace consol {

using nlohmann::json;

namespace {

const json& require_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + ": missing field '" + key + "'");
  return *it;
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_array()) throw InputError(path + "." + key + ": expected an array");
  return v;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path + ": expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(path + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string as_id(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(path + ": expected a string id");
}

ResourceVector as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw InputError(path + ": expected an array");
  std::vector<double> amounts;
  amounts.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    amounts.push_back(as_number(v[j], path + "[" + std::to_string(j) + "]"));
  }
  return ResourceVector(std::move(amounts));
}

}  // namespace

ConsolidationProblem problem_from_json(const json& doc) {
  ConsolidationProblem p;
  const std::string root = "$";
  if (!doc.is_object()) throw InputError("$: expected an object");

  const json& resources = require_array(doc, "resources", root);
  for (std::size_t j = 0; j < resources.size(); ++j) {
    const std::string path = "$.resources[" + std::to_string(j) + "]";
    const json& name = require_field(resources[j], "name", path);
    const json& unit = require_field(resources[j], "unit", path);
    if (!name.is_string() || !unit.is_string()) {
      throw InputError(path + ": name and unit must be strings");
    }
    p.meta.resources.push_back({name.get<std::string>(), unit.get<std::string>()});
  }

  const json& apps = require_array(doc, "applications", root);
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const std::string path = "$.applications[" + std::to_string(i) + "]";
    p.applications.push_back(
        {as_id(require_field(apps[i], "id", path), path + ".id"),
         as_number(require_field(apps[i], "required_throughput", path),
                   path + ".required_throughput")});
  }

  const json& pms = require_array(doc, "pms", root);
  for (std::size_t k = 0; k < pms.size(); ++k) {
    const std::string path = "$.pms[" + std::to_string(k) + "]";
    p.pms.push_back({as_id(require_field(pms[k], "id", path), path + ".id"),
                     as_vector(require_field(pms[k], "capacity", path), path + ".capacity")});
  }

  const json& types = require_array(doc, "vm_types", root);
  for (std::size_t l = 0; l < types.size(); ++l) {
    const std::string path = "$.vm_types[" + std::to_string(l) + "]";
    p.vm_types.push_back({as_id(require_field(types[l], "id", path), path + ".id"),
                          as_vector(require_field(types[l], "config", path), path + ".config")});
  }

  // Ragged or short rows become NaN so validation reports each missing triple.
  const json& profile = require_array(doc, "profile", root);
  const std::size_t A = p.num_apps(), P = p.num_pms(), V = p.num_types();
  if (profile.size() > A) {
    throw InputError("$.profile: has " + std::to_string(profile.size()) +
                     " application rows, expected " + std::to_string(A));
  }
  std::vector<double> entries(A * P * V, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const std::string pi = "$.profile[" + std::to_string(i) + "]";
    if (!profile[i].is_array() || profile[i].size() > P) {
      throw InputError(pi + ": expected an array of at most " + std::to_string(P) + " PM rows");
    }
    for (std::size_t k = 0; k < profile[i].size(); ++k) {
      const std::string pk = pi + "[" + std::to_string(k) + "]";
      const json& row = profile[i][k];
      if (!row.is_array() || row.size() > V) {
        throw InputError(pk + ": expected an array of at most " + std::to_string(V) + " values");
      }
      for (std::size_t l = 0; l < row.size(); ++l) {
        entries[(i * P + k) * V + l] = as_number(row[l], pk + "[" + std::to_string(l) + "]");
      }
    }
  }
  p.profile = PerformanceProfile::dense(A, P, V, std::move(entries));
  return p;
}

json problem_to_json(const ConsolidationProblem& problem) {
  json doc;
  doc["resources"] = json::array();
  for (const auto& r : problem.meta.resources) {
    doc["resources"].push_back({{"name", r.name}, {"unit", r.unit}});
  }
  doc["applications"] = json::array();
  for (const auto& a : problem.applications) {
    doc["applications"].push_back({{"id", a.id}, {"required_throughput", a.required_throughput}});
  }
  auto vec = [](const ResourceVector& v) {
    return json(std::vector<double>(v.amounts().begin(), v.amounts().end()));
  };
  doc["pms"] = json::array();
  for (const auto& pm : problem.pms) doc["pms"].push_back({{"id", pm.id}, {"capacity", vec(pm.capacity)}});
  doc["vm_types"] = json::array();
  for (const auto& t : problem.vm_types) doc["vm_types"].push_back({{"id", t.id}, {"config", vec(t.config)}});
  json profile = json::array();
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    json per_app = json::array();
    for (std::size_t k = 0; k < problem.num_pms(); ++k) {
      auto row = problem.profile.row(i, k);
      per_app.push_back(std::vector<double>(row.begin(), row.end()));
    }
    profile.push_back(std::move(per_app));
  }
  doc["profile"] = std::move(profile);
  return doc;
}

json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Byte offset -> line/column for diagnostics.
    std::size_t line = 1, col = 1;
    for (std::size_t b = 0; b + 1 < e.byte && b < text.size(); ++b) {
      if (text[b] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": JSON syntax error: " + e.what());
  }
}

ConsolidationProblem parse_problem(std::string_view text) {
  return problem_from_json(parse_json_text(text, "<problem>"));
}

std::string serialize_problem(const ConsolidationProblem& problem) {
  return problem_to_json(problem).dump(2) + "\n";
}

DeploymentPlan plan_from_json(const ConsolidationProblem& problem, const json& doc) {
  const std::string root = "$";
  const json& placements = require_array(doc, "placements", root);
  std::vector<Placement> raw;
  for (std::size_t n = 0; n < placements.size(); ++n) {
    const std::string path = "$.placements[" + std::to_string(n) + "]";
    const json& e = placements[n];
    Placement p{as_index(require_field(e, "app", path), path + ".app"),
                as_index(require_field(e, "pm", path), path + ".pm"),
                as_index(require_field(e, "type", path), path + ".type"),
                as_index(require_field(e, "count", path), path + ".count")};
    if (p.count == 0) throw InputError(path + ".count: must be >= 1");
    raw.push_back(p);
  }
  DeploymentPlan plan = make_plan(problem, std::move(raw));

  const json& used = require_array(doc, "used_pms", root);
  std::vector<std::size_t> listed;
  for (std::size_t n = 0; n < used.size(); ++n) {
    listed.push_back(as_index(used[n], "$.used_pms[" + std::to_string(n) + "]"));
  }
  std::sort(listed.begin(), listed.end());
  if (listed != plan.used_pms) {
    throw InputError("$.used_pms: does not match the PMs hosting placements");
  }
  return plan;
}

json plan_to_json(const DeploymentPlan& plan) {
  json doc;
  doc["placements"] = json::array();
  for (const auto& p : plan.placements) {
    doc["placements"].push_back(
        {{"app", p.app}, {"pm", p.pm}, {"type", p.type}, {"count", p.count}});
  }
  doc["used_pms"] = plan.used_pms;
  return doc;
}

DeploymentPlan parse_plan(const ConsolidationProblem& problem, std::string_view text) {
  return plan_from_json(problem, parse_json_text(text, "<plan>"));
}

std::string serialize_plan(const DeploymentPlan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

ConsolidationProblem load_problem(const std::filesystem::path& path) {
  return problem_from_json(parse_json_text(read_text_file(path), path.string()));
}

}  // namespace consol
