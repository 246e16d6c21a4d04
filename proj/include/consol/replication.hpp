#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "consol/model.hpp"
#include "consol/workload.hpp"

namespace consol {

// Synthetic stand-in for a small heterogeneous testbed: three PM classes of
// ten machines each (8 cores/8 GB, 8 cores/8 GB slower, 4 cores/4 GB), all with
// 2 x 1000 Mbps NICs; 80 VM types (1-4 VCPUs x 0.5-2 GB x 200-1000 Mbps); five
// application archetypes with different resource bottlenecks.
//
// Per-VM throughput is archetype base x class speed x a per-(app, class) factor
// drawn once per seed, scaled linearly in the type's bottleneck share
// min_j min(1, v_{j,l} / need_{i,j}).

inline constexpr std::size_t kReplicationPmsPerClass = 10;
inline constexpr std::size_t kReplicationClasses = 3;
inline constexpr std::size_t kReplicationApps = 5;
inline constexpr std::size_t kDayIntervals = 96;  // 15-minute periods in a day

struct AppArchetype {
  std::string name;
  ResourceVector need;  // cores, MB, Mbps at which throughput saturates
  double base = 0.0;    // per-VM throughput at saturation on the fastest class
};

const std::vector<AppArchetype>& app_archetypes();

/// The 80 VM instance types, VCPUs outermost, NIC innermost.
std::vector<VmType> replication_vm_types();

/// f_pm replicates the PM inventory per class; f_app replicates the
/// application archetypes, copies sharing the original's profile.
ConsolidationProblem make_replication_problem(std::uint64_t seed, std::size_t f_pm = 1,
                                              std::size_t f_app = 1);

/// Raw diurnal request-rate traces, one simulated day per application, shaped
/// after a large sports web site's pre-tournament traffic. Unscaled.
std::vector<TraceSeries> make_worldcup_traces(std::uint64_t seed,
                                              const std::vector<std::string>& app_ids,
                                              std::size_t periods = kDayIntervals);

struct Scenario {
  ConsolidationProblem problem;
  std::vector<TraceSeries> traces;  // aligned with problem.applications
};

/// Replication problem plus traces scaled to each app's peak target in the
/// unscaled system, then multiplied by (P / A) / (30 / 5) for scaled systems.
Scenario make_replication_scenario(std::uint64_t seed, std::size_t f_pm = 1, std::size_t f_app = 1,
                                   std::size_t periods = kDayIntervals);

/// Problem copy with required throughputs taken from `demands`.
ConsolidationProblem with_demands(const ConsolidationProblem& problem,
                                  const std::vector<double>& demands);

}  // namespace consol
