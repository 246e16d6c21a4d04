#pragma once

#include "consol/model.hpp"

namespace consol::testing {

/// One app needing 10; two identical 4-core/4 GB PMs; one 2-core/2 GB type
/// giving 6 per instance on either PM.
inline ConsolidationProblem two_pm_problem(double required = 10.0) {
  ConsolidationProblem p;
  p.meta.resources = {{"cpu", "cores"}, {"memory", "MB"}};
  p.applications = {{"web", required}};
  p.pms = {{"pm0", {4, 4096}}, {"pm1", {4, 4096}}};
  p.vm_types = {{"small", {2, 2048}}};
  p.profile = PerformanceProfile::dense(1, 2, 1, {6, 6});
  return p;
}

/// A apps, P PMs, V types, R resources with every amount and throughput 1.
inline ConsolidationProblem uniform_problem(std::size_t apps, std::size_t pms, std::size_t types,
                                            std::size_t resources) {
  ConsolidationProblem p;
  for (std::size_t j = 0; j < resources; ++j) p.meta.resources.push_back({"r" + std::to_string(j), "u"});
  for (std::size_t i = 0; i < apps; ++i) p.applications.push_back({"a" + std::to_string(i), 1.0});
  for (std::size_t k = 0; k < pms; ++k) p.pms.push_back({"p" + std::to_string(k), ResourceVector(resources, 4.0)});
  for (std::size_t l = 0; l < types; ++l) p.vm_types.push_back({"t" + std::to_string(l), ResourceVector(resources, 1.0)});
  p.profile = PerformanceProfile::dense(apps, pms, types, std::vector<double>(apps * pms * types, 1.0));
  return p;
}

}  // namespace consol::testing
