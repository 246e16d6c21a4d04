#include "consol/replication.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace consol {
namespace {

struct PmClass {
  const char* name;
  ResourceVector capacity;
  double speed;
};

const std::vector<PmClass>& pm_classes() {
  static const std::vector<PmClass> classes = {
      {"e5410", {8, 8192, 2000}, 1.0},
      {"opteron2378", {8, 8192, 2000}, 0.9},
      {"opteron2216", {4, 4096, 2000}, 0.75},
  };
  return classes;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_open(rng);
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = unit_open(rng);
  const double u2 = unit_open(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<ResourceType> replication_resources() {
  return {{"cpu", "cores"}, {"memory", "MB"}, {"nic", "Mbps"}};
}

}  // namespace

const std::vector<AppArchetype>& app_archetypes() {
  static const std::vector<AppArchetype> archetypes = {
      {"tpcw", {2, 1024, 200}, 450.0},
      {"ycsb", {2, 2048, 400}, 4000.0},
      {"abk", {1, 512, 200}, 6000.0},
      {"abm", {1, 512, 400}, 50.0},
      {"sysbench", {4, 512, 200}, 900.0},
  };
  return archetypes;
}

std::vector<VmType> replication_vm_types() {
  std::vector<VmType> types;
  for (int cpu = 1; cpu <= 4; ++cpu) {
    for (int mem = 1; mem <= 4; ++mem) {
      for (int nic = 1; nic <= 5; ++nic) {
        types.push_back({"v" + std::to_string(cpu) + "c-" + std::to_string(512 * mem) + "m-" +
                             std::to_string(200 * nic) + "n",
                         {double(cpu), 512.0 * mem, 200.0 * nic}});
      }
    }
  }
  return types;
}

ConsolidationProblem make_replication_problem(std::uint64_t seed, std::size_t f_pm,
                                              std::size_t f_app) {
  if (f_pm < 1 || f_app < 1) throw std::invalid_argument("scaling factors must be >= 1");
  const auto& classes = pm_classes();
  const auto& archetypes = app_archetypes();

  ConsolidationProblem problem;
  problem.meta.resources = replication_resources();
  problem.vm_types = replication_vm_types();

  std::vector<std::size_t> pm_class;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t n = 0; n < kReplicationPmsPerClass * f_pm; ++n) {
      problem.pms.push_back({std::string(classes[c].name) + "-" + std::to_string(n),
                             classes[c].capacity});
      pm_class.push_back(c);
    }
  }

  // Drawn for the five archetypes only, so replicated apps share profiles and
  // the factors do not depend on f_app.
  auto rng = stream(seed, 1);
  std::vector<double> factor(archetypes.size() * classes.size());
  for (double& f : factor) f = uniform(rng, 0.85, 1.15);

  const std::size_t apps = archetypes.size() * f_app;
  const std::size_t types = problem.vm_types.size();
  std::vector<double> entries;
  entries.reserve(apps * classes.size() * types);
  for (std::size_t i = 0; i < apps; ++i) {
    const std::size_t a = i % archetypes.size();
    const auto& arch = archetypes[a];
    problem.applications.push_back(
        {f_app == 1 ? arch.name : arch.name + "-" + std::to_string(i / archetypes.size()), 0.0});
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double base = arch.base * classes[c].speed * factor[a * classes.size() + c];
      for (const auto& type : problem.vm_types) {
        double share = 1.0;
        for (std::size_t j = 0; j < arch.need.size(); ++j) {
          share = std::min(share, type.config[j] / arch.need[j]);
        }
        entries.push_back(base * share);
      }
    }
  }
  problem.profile = PerformanceProfile::classed(apps, std::move(pm_class), classes.size(), types,
                                                std::move(entries));
  return problem;
}

std::vector<TraceSeries> make_worldcup_traces(std::uint64_t seed,
                                              const std::vector<std::string>& app_ids,
                                              std::size_t periods) {
  std::vector<TraceSeries> traces;
  for (std::size_t i = 0; i < app_ids.size(); ++i) {
    auto rng = stream(seed, 100 + i);
    // Evening peak with a per-day shift, overnight trough around a third of
    // the peak, a smaller midday shoulder and a few percent of noise.
    const double peak_hour = uniform(rng, 15.5, 19.0);
    const double floor = uniform(rng, 0.3, 0.4);
    const double shoulder = uniform(rng, 0.05, 0.15);
    const double level = uniform(rng, 800.0, 1200.0);
    TraceSeries trace{app_ids[i], 900, {}};
    for (std::size_t t = 0; t < periods; ++t) {
      const double hour = 24.0 * static_cast<double>(t) / static_cast<double>(kDayIntervals);
      const double wave = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (hour - peak_hour) / 24.0));
      const double noon = std::exp(-0.5 * std::pow((hour - 12.5) / 1.5, 2));
      double shape = floor + (1.0 - floor) * std::pow(wave, 1.5) + shoulder * noon;
      shape *= 1.0 + 0.03 * standard_normal(rng);
      trace.demands.push_back(level * std::max(shape, 0.05));
    }
    traces.push_back(std::move(trace));
  }
  return traces;
}

Scenario make_replication_scenario(std::uint64_t seed, std::size_t f_pm, std::size_t f_app,
                                   std::size_t periods) {
  const ConsolidationProblem base = make_replication_problem(seed, 1, 1);
  std::vector<std::string> ids;
  for (const auto& app : base.applications) ids.push_back(app.id);
  const auto raw = make_worldcup_traces(seed, ids, periods);

  Scenario scenario{make_replication_problem(seed, f_pm, f_app), {}};
  const double ratio = (static_cast<double>(scenario.problem.num_pms()) /
                        static_cast<double>(scenario.problem.num_apps())) /
                       (static_cast<double>(base.num_pms()) / static_cast<double>(base.num_apps()));
  for (std::size_t i = 0; i < scenario.problem.num_apps(); ++i) {
    const std::size_t a = i % base.num_apps();
    TraceSeries trace = scale_trace(raw[a], base, a);
    trace.app_id = scenario.problem.applications[i].id;
    for (double& d : trace.demands) d *= ratio;
    scenario.traces.push_back(std::move(trace));
  }
  return scenario;
}

ConsolidationProblem with_demands(const ConsolidationProblem& problem,
                                  const std::vector<double>& demands) {
  if (demands.size() != problem.num_apps()) {
    throw std::invalid_argument("demand vector does not match the application count");
  }
  ConsolidationProblem out = problem;
  for (std::size_t i = 0; i < demands.size(); ++i) out.applications[i].required_throughput = demands[i];
  return out;
}

}  // namespace consol
